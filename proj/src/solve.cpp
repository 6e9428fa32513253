// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/solve.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace isomortar {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

double max_abs(const SparseMatrix& m) {
  double v = 0;
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

ColMatrix scaled_kkt(const SaddleSystem& s, double scale) {
  const int n = static_cast<int>(s.K.rows());
  const int m = static_cast<int>(s.B.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(s.K.nonZeros() + 2 * s.B.nonZeros());
  for (int r = 0; r < s.K.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(s.K, r); it; ++it) t.emplace_back(r, it.col(), it.value());
  for (int r = 0; r < s.B.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(s.B, r); it; ++it) {
      t.emplace_back(n + r, it.col(), scale * it.value());
      t.emplace_back(it.col(), n + r, scale * it.value());
    }
  ColMatrix a(n + m, n + m);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

SparseMatrix kkt_matrix(const SaddleSystem& system) { return SparseMatrix(scaled_kkt(system, 1.0)); }

SaddleSolution solve_saddle(const SaddleSystem& s, const SolveOptions& options) {
  const int n = static_cast<int>(s.K.rows());
  const int m = static_cast<int>(s.B.rows());
  if (s.K.cols() != n || s.f.size() != n || (m > 0 && s.B.cols() != n))
    throw InternalError("saddle system blocks have inconsistent sizes");

  // balance the constraint rows against the stiffness
  const double kmax = max_abs(s.K);
  const double bmax = m > 0 ? max_abs(s.B) : 0.0;
  const double scale = (kmax > 0 && bmax > 0) ? kmax / bmax : 1.0;
  const ColMatrix a = scaled_kkt(s, scale);

  Eigen::SparseLU<ColMatrix> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw SingularityError("KKT factorization failed (" + lu.lastErrorMessage() +
                           "); the gauge probably left a kernel");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = s.f;
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SingularityError("KKT solve produced non-finite values");

  SaddleSolution sol;
  const double fnorm = s.f.norm();
  auto measure = [&] {
    sol.u = x.head(n);
    sol.lambda = scale * x.tail(m);
    Eigen::VectorXd r = s.K * sol.u - s.f;
    if (m > 0) r += s.B.transpose() * sol.lambda;
    sol.primal_residual = r.norm() / (fnorm + 1);
    const double unorm = sol.u.norm();
    sol.constraint_residual = m > 0 && unorm > 0 ? (s.B * sol.u).norm() / unorm : 0.0;
    sol.history.push_back(std::max(sol.primal_residual, sol.constraint_residual));
  };
  measure();
  while (sol.history.back() > options.tolerance) {
    if (sol.refinement_steps == options.max_refinement_steps)
      throw ConvergenceError("saddle solve stalled at residual " +
                                 std::to_string(sol.history.back()),
                             sol.history);
    x += lu.solve(rhs - a * x);
    ++sol.refinement_steps;
    measure();
  }
  return sol;
}

SparseMatrix block_diagonal(const std::vector<SparseMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  std::vector<Eigen::Triplet<double>> t;
  Eigen::Index r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (int r = 0; r < b.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(b, r); it; ++it)
        t.emplace_back(r0 + r, c0 + it.col(), it.value());
    r0 += b.rows();
    c0 += b.cols();
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix hstack(const std::vector<SparseMatrix>& blocks) {
  if (blocks.empty()) return {};
  const Eigen::Index rows = blocks.front().rows();
  Eigen::Index cols = 0;
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw InternalError("hstack: row counts differ");
    for (int r = 0; r < b.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(b, r); it; ++it)
        t.emplace_back(r, cols + it.col(), it.value());
    cols += b.cols();
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace isomortar
