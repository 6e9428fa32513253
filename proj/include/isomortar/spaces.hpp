// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_SPACES_HPP
#define ISOMORTAR_SPACES_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "isomortar/bspline.hpp"
#include "isomortar/geometry.hpp"

namespace isomortar {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Degree-p node space and curl-conforming edge space of one patch.
///
/// Vertex (i, j, k) is the control-mesh node of basis N_i N_j N_k. The edge
/// function of component d at index (i, j, k) has the Curry-Schoenberg
/// factor D_{i_d} in direction d and N in the two others; it connects
/// vertices (i, j, k) and (i, j, k) + e_d of the control mesh.
struct PatchEdgeSpace {
  std::array<KnotVector<>, 3> knots;    ///< degree p
  std::array<KnotVector<>, 3> reduced;  ///< degree p-1
  std::array<int, 3> n{};               ///< vertex counts per direction
  std::array<int, 3> offset{};          ///< first local dof of each component
  int local_dofs = 0;
  std::vector<int> vertex;              ///< local vertex (flat) -> global vertex
  std::vector<int> dof;                 ///< local edge dof -> global dof
  std::vector<signed char> sign;        ///< local = sign * global

  int vertex_index(int i, int j, int k) const { return i + n[0] * (j + n[1] * k); }
  std::array<int, 3> component_counts(int d) const {
    auto c = n;
    --c[d];
    return c;
  }
  int edge_index(int d, int i, int j, int k) const {
    const auto c = component_counts(d);
    return offset[d] + i + c[0] * (j + c[1] * k);
  }
  /// (component, i, j, k) of a local edge dof.
  std::array<int, 4> edge_multi_index(int local) const;
};

/// Reference-domain values of the nonzero local edge functions at a point.
struct LocalEdgeBasis {
  std::vector<int> local;    ///< local dof indices
  std::vector<Vec3> value;   ///< covariant reference value
  std::vector<Vec3> curl;    ///< reference curl
};

void eval_reference_edge_basis(const PatchEdgeSpace& ps, const Vec3& xi, LocalEdgeBasis& out);

/// The multipatch spaces S_p^0 (vertices) and S_p^1 (edges) with global
/// conforming numbering. Global edge e is oriented from its lower to its
/// higher global vertex.
class EdgeSpace {
 public:
  const MultipatchModel& model() const { return *model_; }
  std::shared_ptr<const MultipatchModel> model_ptr() const { return model_; }
  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(edge_vertices_.size()); }
  int num_vertices() const { return num_vertices_; }
  int num_patches() const { return static_cast<int>(patches_.size()); }
  const PatchEdgeSpace& patch(int p) const { return patches_[p]; }
  const std::array<int, 2>& edge_vertices(int e) const { return edge_vertices_[e]; }
  /// Parametric direction of the edge in the first patch that owns it.
  int edge_direction(int e) const { return edge_direction_[e]; }
  /// Global endpoints in increasing local parameter order.
  const std::array<int, 2>& edge_forward(int e) const { return edge_forward_[e]; }

  friend EdgeSpace build_edge_space(std::shared_ptr<const MultipatchModel> model, int degree);

 private:
  std::shared_ptr<const MultipatchModel> model_;
  int degree_ = 0;
  int num_vertices_ = 0;
  std::vector<PatchEdgeSpace> patches_;
  std::vector<std::array<int, 2>> edge_vertices_;
  std::vector<std::array<int, 2>> edge_forward_;
  std::vector<int> edge_direction_;
};

/// Builds S_p^1 over a conforming multipatch model with uniform knot
/// vectors of degree p (element counts from each patch). Throws
/// TopologyError when glued faces do not share their discretization.
EdgeSpace build_edge_space(std::shared_ptr<const MultipatchModel> model, int degree);

/// Closed-form dimension of the per-patch edge space.
inline int edge_space_dimension(int n1, int n2, int n3) {
  return (n1 - 1) * n2 * n3 + n1 * (n2 - 1) * n3 + n1 * n2 * (n3 - 1);
}

struct PushForward {
  Vec3 value;
  Vec3 curl;
};

/// Covariant transformation of values (J^{-T} v) and contravariant Piola
/// transformation of curls (J c / det J).
inline PushForward push_forward_curl_conforming(const JacobianInfo& jac, const Vec3& ref_value,
                                                const Vec3& ref_curl) {
  return {jac.inverse_transpose * ref_value, jac.matrix * ref_curl / jac.determinant};
}

/// Discrete gradient S_p^0 -> S_p^1: the signed vertex-edge incidence.
SparseMatrix gradient_matrix(const EdgeSpace& space);

/// Commuting interpolants: Greville collocation for S_p^0, histopolation
/// between Greville points along each edge direction for S_p^1.
Eigen::VectorXd interpolate_scalar(const EdgeSpace& space, const ScalarField& f);
Eigen::VectorXd interpolate_field(const EdgeSpace& space, const VectorField& a);

/// Value of an S_p^0 function at a reference point of a patch.
double evaluate_scalar(const EdgeSpace& space, const Eigen::VectorXd& coeffs, int patch,
                       const Vec3& xi);

/// Vector potential and its curl at physical points given by reference
/// coordinates.
class FieldEvaluator {
 public:
  struct Sample {
    Vec3 point;
    Vec3 value;
    Vec3 curl;
  };
  FieldEvaluator(const EdgeSpace& space, const Eigen::VectorXd& coeffs);
  Sample operator()(int patch, const Vec3& xi) const;

 private:
  const EdgeSpace* space_;
  const Eigen::VectorXd* coeffs_;
};

/// Essential (tangential) boundary condition on tagged faces.
struct DofConstraints {
  std::vector<char> constrained;       ///< per global edge dof
  std::vector<char> dirichlet_vertex;  ///< per global vertex
  std::vector<int> free_dofs;          ///< increasing
  std::vector<int> free_index;         ///< global dof -> free index or -1
  int num_free() const { return static_cast<int>(free_dofs.size()); }
};

/// Marks every dof whose tangential trace is nonzero on a face carrying one
/// of `tags`; unknown tags raise ConfigError.
DofConstraints apply_essential_bc(const EdgeSpace& space, const std::vector<std::string>& tags);

/// Sets constrained entries to zero.
void project_to_free(const DofConstraints& c, Eigen::VectorXd& coeffs);

/// One stator interface arc of the multiplier space.
struct TraceArc {
  int patch = 0;
  int face = 0;
  Arc arc;
  KnotVector<> theta_knots{{0, 1}, 0};
  int first_vertex = 0;  ///< global theta index of local vertex 0
};

/// Value of one multiplier basis function in the cylindrical frame.
struct TraceBasisValue {
  int dof;
  double mu_theta;
  double mu_z;
};

/// Tangential multiplier space on the cylindrical interface, built from
/// the stator discretization with degree q: the rotated trace
/// mu = w x n12 (n12 = e_r, rotor to stator) of the surface edge space.
/// Dofs: theta edges (J, k) first, then axial edges (J, k).
class TraceSpace {
 public:
  int degree() const { return degree_; }
  double radius() const { return radius_; }
  double z0() const { return z0_; }
  double length() const { return length_; }
  const std::vector<TraceArc>& arcs() const { return arcs_; }
  const KnotVector<>& z_knots() const { return z_knots_; }
  int num_theta_vertices() const { return n_theta_; }
  int num_z_vertices() const { return z_knots_.size(); }
  int num_theta_edges() const { return n_theta_ * num_z_vertices(); }
  int num_z_edges() const { return n_theta_ * (num_z_vertices() - 1); }
  int num_dofs() const { return num_theta_edges() + num_z_edges(); }
  int theta_edge(int j, int k) const { return j + n_theta_ * k; }
  int z_edge(int j, int k) const { return num_theta_edges() + j + n_theta_ * k; }

  /// Nonzero basis functions at reference coordinates of arc a.
  void evaluate(int arc, double xi_theta, double xi_z, std::vector<TraceBasisValue>& out) const;

  friend TraceSpace build_trace_space(const MultipatchModel& stator, const std::string& tag,
                                      int p, int q);

 private:
  int degree_ = 0;
  double radius_ = 0, z0_ = 0, length_ = 0;
  std::vector<TraceArc> arcs_;
  KnotVector<> z_knots_{{0, 1}, 0};
  int n_theta_ = 0;
};

/// Throws StabilityError unless p - q is a positive odd number and q >= 1.
TraceSpace build_trace_space(const MultipatchModel& stator, const std::string& tag, int p, int q);

/// The interface arc (angles about the z axis) of an annular patch face.
Arc interface_arc(const Patch& patch, int face);

}  // namespace isomortar

#endif  // ISOMORTAR_SPACES_HPP
