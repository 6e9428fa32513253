// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_GEOMETRY_HPP
#define ISOMORTAR_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "isomortar/bspline.hpp"

namespace isomortar {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kMu0 = 4e-7 * 3.14159265358979323846;

/// Derivative information of a patch mapping at one reference point.
struct JacobianInfo {
  Vec3 point;              ///< F(xi)
  Mat3 matrix;             ///< columns dF/dxi_d
  double determinant = 0;
  Mat3 inverse_transpose;  ///< covariant push-forward
};

/// Rational quadratic circular arc, the exact building block of every
/// curved patch.
struct Arc {
  Vec2 center = Vec2::Zero();
  double radius = 0;
  double theta0 = 0;
  double theta1 = 0;
  std::array<Vec2, 3> control_points;
  std::array<double, 3> weights{};

  Vec2 evaluate(double xi) const;
  /// dF/dxi of the rational curve.
  Vec2 derivative(double xi) const;
};

/// Arc from angle theta0 to theta1 (counter-clockwise); requires
/// 0 < theta1 - theta0 < pi.
Arc make_arc(const Vec2& center, double radius, double theta0, double theta1);

/// Polar angle (about the arc center) of the point at parameter xi, in
/// [theta0, theta1].
double angle_of_parameter(const Arc& arc, double xi);
/// Inverse of angle_of_parameter (Newton with bisection fallback).
double parameter_of_angle(const Arc& arc, double theta);

/// Trivariate NURBS mapping from the reference cube to physical space.
class Patch {
 public:
  Patch(std::array<KnotVector<>, 3> knots, std::vector<Vec3> control_points,
        std::vector<double> weights, std::array<int, 3> elements);

  const TensorBasis<>& basis() const { return basis_; }
  const std::vector<Vec3>& control_points() const { return control_points_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Number of discretization elements per direction (uniform refinement).
  const std::array<int, 3>& elements() const { return elements_; }

  Vec3 evaluate(const Vec3& xi) const;
  /// F and its first derivatives; no singularity check.
  std::pair<Vec3, Mat3> evaluate_with_derivatives(const Vec3& xi) const;

  /// Rigid rotation about the z axis.
  Patch rotated(double angle) const;

 private:
  TensorBasis<> basis_;
  std::vector<Vec3> control_points_;
  std::vector<double> weights_;
  std::array<int, 3> elements_;
};

/// Jacobian of the mapping; throws GeometryError (with patch id and
/// location) when the determinant is not positive.
JacobianInfo jacobian(const Patch& patch, const Vec3& xi, int patch_id = -1);

/// Affine box [origin, origin + size] with degree-1 geometry.
Patch make_box_patch(const Vec3& origin, const Vec3& size, std::array<int, 3> elements);

/// Annular sector: xi1 radial (r0 -> r1), xi2 angular (theta0 -> theta1,
/// one rational quadratic arc), xi3 axial (z0 -> z0 + length).
Patch make_sector_patch(double r0, double r1, double theta0, double theta1, double z0,
                        double length, std::array<int, 3> elements);

/// Face index 2*d + s: the face xi_d = s.
inline int face_direction(int face) { return face / 2; }
inline int face_side(int face) { return face % 2; }
/// The two tangential directions of a face in increasing order.
std::array<int, 2> face_tangents(int face);
/// Reference point on a face from face coordinates (u, v).
Vec3 face_point(int face, double u, double v);

/// Material and source data attached to one patch.
struct Region {
  std::string material;              ///< key into the reluctivity table
  double radial_magnetization = 0;   ///< signed |M| along e_r (A/m)
  Vec3 uniform_magnetization = Vec3::Zero();
  double axial_current_density = 0;  ///< J_z (A/m^2)
};

/// Conforming glue record between two patch faces. Face coordinates (u, v)
/// of face a map to (u', v') of face b: swap exchanges u and v first, then
/// flip_u / flip_v reverse the coordinates of b.
struct PatchInterface {
  int patch_a = 0, face_a = 0, patch_b = 0, face_b = 0;
  bool swap = false, flip_u = false, flip_v = false;
};

struct MultipatchModel {
  std::vector<Patch> patches;
  std::vector<Region> regions;
  /// Per patch and face: boundary tag, empty for glued faces.
  std::vector<std::array<std::string, 6>> boundary_tags;
  std::vector<PatchInterface> interfaces;
  /// All patches are annular sectors laid out as in make_sector_patch.
  bool annular = false;

  int size() const { return static_cast<int>(patches.size()); }
};

/// Detects coincident faces between patches (sampled at 5x5 points within
/// 1e-12 relative) and fills model.interfaces.
void glue(MultipatchModel& model);

/// Checks glue coincidence, tag coverage of exterior faces and positive
/// Jacobians on a 3x3x3 sample grid.
void validate(const MultipatchModel& model);

MultipatchModel rotated(const MultipatchModel& model, double angle);

/// Volume by Gauss quadrature of det J.
double volume(const MultipatchModel& model, int points_per_direction = 6);

struct RingSpec {
  double r_inner = 0, r_outer = 0;
  int radial_elements = 1;
  std::string material;
  double magnetization = 0;     ///< |M| in A/m, signed per sector
  bool carries_current = false;
};

struct SectorSpec {
  double theta0 = 0, theta1 = 0;
  int angular_elements = 1;
  double magnet_sign = 0;
  double current_density = 0;
};

/// Full annulus of rings x sectors patches extruded along z. Sectors wider
/// than pi/2 are split into equal sub-arcs. Inner/outer cylinder faces get
/// the given tags, axial faces "zmin"/"zmax".
MultipatchModel build_annulus(const std::vector<RingSpec>& rings,
                              const std::vector<SectorSpec>& sectors, double length,
                              int axial_elements, const std::string& inner_tag,
                              const std::string& outer_tag);

/// Parameters of the slotless surface-magnet machine.
struct MachineConfig {
  double shaft_radius = 0.02;
  double rotor_outer_radius = 0.044;
  double interface_radius = 0.045;
  double stator_inner_radius = 0.046;
  double stator_outer_radius = 0.075;
  double magnet_thickness = 0.006;
  double winding_thickness = 0.008;
  double axial_length = 0.1;
  int pole_pairs = 2;
  double magnet_remanence = 1.2;  ///< T
  double magnet_arc_fraction = 0.8;
  double current_density = 5e6;   ///< A/m^2 amplitude
  double current_phase = 0;       ///< rad, phase A current = J cos(phase)
  double iron_relative_permeability = 1000;
  int degree = 2;
  int multiplier_degree = 1;
  int radial_elements = 2;
  int rotor_elements_per_pole = 6;
  int stator_elements_per_belt = 2;
  int axial_elements = 1;
  int refinement = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double magnetization() const { return magnet_remanence / kMu0; }
};

struct MachineModel {
  MultipatchModel rotor;   ///< r in [shaft, R], at rotation angle 0
  MultipatchModel stator;  ///< r in [R, stator outer]
};

MachineModel build_machine(const MachineConfig& cfg);

/// Phase current factor of stator belt k (A+, C-, B+, A-, C+, B- pattern).
double belt_current_factor(int belt, double phase);

}  // namespace isomortar

#endif  // ISOMORTAR_GEOMETRY_HPP
