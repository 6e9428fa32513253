// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_MORTAR_HPP
#define ISOMORTAR_MORTAR_HPP

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

#include "isomortar/spaces.hpp"

namespace isomortar {

/// One side's interface arc with the angles of its knot images.
struct ArcSpan {
  int patch = -1;
  int face = 0;
  Arc arc;
  std::vector<double> angles;  ///< increasing, from arc.theta0 to arc.theta1
};

/// Interface arcs of all faces carrying `tag`, ordered by start angle in
/// [0, 2pi), with the angular knot images of the space's discretization.
std::vector<ArcSpan> interface_spans(const EdgeSpace& space, const std::string& tag);

/// Arc of radius 1 from theta0 to theta1 whose knot images are the images
/// of `elements` uniform parameter intervals.
ArcSpan make_span(double theta0, double theta1, int elements);

struct MortarCell {
  double theta0 = 0, theta1 = 0;  ///< interface angles, theta0 in [0, 2pi)
  int stator_span = 0;
  int rotor_span = 0;
};

struct MortarInterface {
  double radius = 0;
  double z0 = 0, length = 0;
  double alpha = 0;  ///< normalized into [0, 2pi)
  std::vector<ArcSpan> stator;
  std::vector<ArcSpan> rotor;  ///< unrotated; interface angle = rotor angle + alpha
  std::vector<double> breakpoints;    ///< merged, increasing, in [0, 2pi)
  std::vector<double> z_breakpoints;  ///< reference z in [0, 1]
  std::vector<MortarCell> cells;

  int num_cells() const { return static_cast<int>(cells.size()); }
};

/// Merged cells of the stator and rotated rotor knot images. Throws
/// GeometryError when either side leaves a gap or overlaps.
MortarInterface build_intersection_mesh(std::vector<ArcSpan> stator, std::vector<ArcSpan> rotor,
                                        double alpha, std::vector<double> z_breakpoints,
                                        double radius = 1, double z0 = 0, double length = 1);

/// Convenience: spans and z knots read from both spaces and the trace.
MortarInterface build_intersection_mesh(const EdgeSpace& stator, const EdgeSpace& rotor,
                                        const TraceSpace& trace, double alpha,
                                        const std::string& tag = "interface");

/// Reference point in the span's volume patch at local angle theta (in
/// the span's own frame) and reference height zeta.
Vec3 span_reference_point(const ArcSpan& span, double theta, double zeta);

/// Angle theta shifted by multiples of 2pi into [span.arc.theta0, +2pi).
double angle_in_span(const ArcSpan& span, double theta);

struct Coupling {
  SparseMatrix stator;  ///< trace dofs x stator dofs, jump sign +1
  SparseMatrix rotor;   ///< trace dofs x rotor dofs, jump sign -1
};

struct CouplingOptions {
  int theta_points = 0;  ///< 0 means max(p, q) + 2
  int z_points = 0;      ///< 0 means p + 2
  int subdivide = 1;     ///< split every cell into this many equal pieces
  int threads = 1;
};

/// b(u, mu) = (u_stator - u_rotor, mu) on the interface, integrated over
/// the merged cells with measure R dtheta dz.
Coupling assemble_coupling(const MortarInterface& mesh, const EdgeSpace& stator,
                           const EdgeSpace& rotor, const TraceSpace& trace,
                           const CouplingOptions& options = {});

struct MultiplierValue {
  double theta = 0;
  double z = 0;
  double lambda3() const { return z; }  ///< identified with -H_theta
};

/// Multiplier in the cylindrical frame at interface angle theta and height z.
MultiplierValue evaluate_multiplier(const TraceSpace& trace, const Eigen::VectorXd& lambda,
                                    double theta, double z);

void write_cells(std::ostream& out, const MortarInterface& mesh);

}  // namespace isomortar

#endif  // ISOMORTAR_MORTAR_HPP
