// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_GAUGE_HPP
#define ISOMORTAR_GAUGE_HPP

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

#include "isomortar/spaces.hpp"

namespace isomortar {

/// Vertex-edge graph of the control mesh: vertices are S_p^0 dofs, edges
/// are S_p^1 dofs.
struct ControlGraph {
  int num_vertices = 0;
  std::vector<std::array<int, 2>> edges;  ///< (lo, hi) global vertices
  std::vector<std::array<int, 2>> forward;
  std::vector<int> direction;
  std::vector<char> constrained_edge;
  std::vector<char> dirichlet_vertex;
  bool annular = false;

  int num_edges() const { return static_cast<int>(edges.size()); }
};

ControlGraph build_control_graph(const EdgeSpace& space, const DofConstraints& bc);

enum class TreeOrder { BreadthFirst, DepthFirst };

struct TreeOptions {
  TreeOrder order = TreeOrder::BreadthFirst;
  /// Collapse every Dirichlet vertex into one root instead of one root per
  /// connected Dirichlet set; the edges joining separate Dirichlet sets are
  /// then left in the cotree.
  bool merge_dirichlet_components = false;
  /// Add one azimuthal edge per annular component without Dirichlet vertices.
  bool ring_generators = true;
};

struct TreeCotreeSplit {
  std::vector<int> tree;        ///< increasing global dofs, includes generators
  std::vector<int> cotree;      ///< increasing global dofs
  std::vector<int> generators;  ///< subset of tree
  std::vector<int> cotree_index;  ///< global dof -> cotree position or -1
  int num_components = 0;
  int num_dofs = 0;

  int num_cotree() const { return static_cast<int>(cotree.size()); }
  /// num_dofs x num_cotree injection.
  SparseMatrix selection() const;
};

TreeCotreeSplit build_tree(const ControlGraph& graph, const TreeOptions& options = {});

/// Cotree principal submatrix / cotree columns / cotree entries.
SparseMatrix reduce_matrix(const SparseMatrix& k, const TreeCotreeSplit& split);
SparseMatrix reduce_columns(const SparseMatrix& b, const TreeCotreeSplit& split);
Eigen::VectorXd reduce_vector(const Eigen::VectorXd& f, const TreeCotreeSplit& split);
/// Inserts zeros at tree dofs.
Eigen::VectorXd expand(const Eigen::VectorXd& reduced, const TreeCotreeSplit& split);

/// Number of eigenvalues of the symmetric matrix below rel_tol * max |eig|
/// (dense, small instances only).
int numerical_kernel_dimension(const SparseMatrix& k, double rel_tol = 1e-10);

/// Throws GaugeError with the kernel dimension when the matrix has
/// near-zero pivots in a sparse LDLT factorization.
void check_nonsingular(const SparseMatrix& k, double pivot_tol = 1e-12);

void write_split(std::ostream& out, const TreeCotreeSplit& split);

/// Columns spanning the multiplier subspace that annihilates surface
/// gradients: the rotated surface gradients of all but one vertex and one
/// azimuthal seam cocycle. Size num_dofs x num_theta_vertices*num_z_vertices.
SparseMatrix multiplier_gauge_basis(const TraceSpace& trace);

}  // namespace isomortar

#endif  // ISOMORTAR_GAUGE_HPP
