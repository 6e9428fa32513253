// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_SOLVE_HPP
#define ISOMORTAR_SOLVE_HPP

#include <Eigen/Core>

#include <vector>

#include "isomortar/spaces.hpp"

namespace isomortar {

/// [[K, B^T], [B, 0]] [u; lambda] = [f; 0].
struct SaddleSystem {
  SparseMatrix K;
  SparseMatrix B;  ///< may have zero rows
  Eigen::VectorXd f;
};

struct SolveOptions {
  double tolerance = 1e-10;
  int max_refinement_steps = 5;
};

struct SaddleSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  double primal_residual = 0;      ///< |K u + B^T lambda - f| / (|f| + 1)
  double constraint_residual = 0;  ///< |B u| / |u|
  int refinement_steps = 0;
  std::vector<double> history;
};

/// Direct sparse LU of the KKT matrix with iterative refinement. Throws
/// SingularityError on factorization breakdown and ConvergenceError when
/// the residuals stay above the tolerance.
SaddleSolution solve_saddle(const SaddleSystem& system, const SolveOptions& options = {});

/// The symmetric KKT matrix.
SparseMatrix kkt_matrix(const SaddleSystem& system);

SparseMatrix block_diagonal(const std::vector<SparseMatrix>& blocks);
SparseMatrix hstack(const std::vector<SparseMatrix>& blocks);

}  // namespace isomortar

#endif  // ISOMORTAR_SOLVE_HPP
