// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_BSPLINE_HPP
#define ISOMORTAR_BSPLINE_HPP

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "isomortar/errors.hpp"

namespace isomortar {

/// Absolute tolerance used to detect repeated knots.
inline constexpr double kKnotTolerance = 1e-12;

/// Open (clamped) knot vector on [0,1] together with its degree.
///
/// Knots are rescaled to [0,1] on construction and values closer than
/// kKnotTolerance are snapped together, so multiplicities are exact
/// afterwards. Immutable.
template <typename Scalar = double>
class KnotVector {
 public:
  KnotVector(std::vector<Scalar> knots, int degree)
      : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0) throw DegreeError("knot vector: negative degree");
    const int len = static_cast<int>(knots_.size());
    if (len < 2 * (degree_ + 1))
      throw DegreeError("knot vector: need at least 2(p+1) knots, got " +
                        std::to_string(len));
    for (int i = 0; i + 1 < len; ++i)
      if (knots_[i + 1] < knots_[i])
        throw DomainError("knot vector: knots must be non-decreasing");
    const Scalar lo = knots_.front();
    const Scalar hi = knots_.back();
    if (!(hi > lo)) throw DomainError("knot vector: zero parametric length");
    for (auto& k : knots_) k = (k - lo) / (hi - lo);
    knots_.front() = Scalar(0);
    knots_.back() = Scalar(1);
    for (int i = 1; i < len; ++i)
      if (std::abs(knots_[i] - knots_[i - 1]) <= Scalar(kKnotTolerance))
        knots_[i] = knots_[i - 1];
    for (int i = len - 2; i >= 0 && std::abs(knots_[i] - Scalar(1)) <= Scalar(kKnotTolerance); --i)
      knots_[i] = Scalar(1);

    for (int i = 0; i <= degree_; ++i) {
      if (knots_[i] != Scalar(0) || knots_[len - 1 - i] != Scalar(1))
        throw DomainError("knot vector: not open (first and last p+1 knots must coincide)");
    }
    const int max_mult = std::max(degree_, 1);
    int run = 1;
    for (int i = degree_ + 1; i < len - degree_ - 1; ++i) {
      if (knots_[i] == Scalar(0) || knots_[i] == Scalar(1))
        throw DomainError("knot vector: end knot multiplicity exceeds p+1");
      run = (knots_[i] == knots_[i - 1] && i > degree_ + 1) ? run + 1 : 1;
      if (run > max_mult)
        throw DomainError("knot vector: interior multiplicity exceeds degree");
    }
  }

  /// Uniform open knot vector with `elements` equal knot spans.
  static KnotVector uniform(int degree, int elements) {
    if (elements < 1) throw DomainError("knot vector: need at least one element");
    std::vector<Scalar> k;
    for (int i = 0; i < degree; ++i) k.push_back(Scalar(0));
    for (int e = 0; e <= elements; ++e) k.push_back(Scalar(e) / Scalar(elements));
    for (int i = 0; i < degree; ++i) k.push_back(Scalar(1));
    return KnotVector(std::move(k), degree);
  }

  int degree() const { return degree_; }
  /// Number of basis functions n.
  int size() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  const std::vector<Scalar>& knots() const { return knots_; }
  Scalar operator[](int i) const { return knots_[i]; }

  /// Distinct knot values, 0 and 1 included.
  std::vector<Scalar> breakpoints() const {
    std::vector<Scalar> b;
    for (auto k : knots_)
      if (b.empty() || k != b.back()) b.push_back(k);
    return b;
  }
  int num_elements() const { return static_cast<int>(breakpoints().size()) - 1; }

  /// Greville abscissae, one per basis function.
  std::vector<Scalar> greville() const {
    std::vector<Scalar> g(size());
    for (int i = 0; i < size(); ++i) {
      Scalar s = 0;
      for (int j = 1; j <= degree_; ++j) s += knots_[i + j];
      g[i] = degree_ > 0 ? s / Scalar(degree_) : (knots_[i] + knots_[i + 1]) / Scalar(2);
    }
    return g;
  }

  /// Knot span index mu with knots[mu] <= x < knots[mu+1]; x == 1 maps to
  /// the last non-empty span (left limit).
  int find_span(Scalar x) const {
    x = checked(x);
    const int n = size();
    if (x >= knots_[n]) {
      int mu = n - 1;
      while (mu > degree_ && knots_[mu] == knots_[mu + 1]) --mu;
      return mu;
    }
    auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n + 1, x);
    return static_cast<int>(it - knots_.begin()) - 1;
  }

  /// Clamps round-off excursions of at most 1e-13 and rejects anything else
  /// outside [0,1].
  static Scalar checked(Scalar x) {
    if (!(x >= Scalar(-1e-13) && x <= Scalar(1) + Scalar(1e-13)))
      throw DomainError("B-spline evaluation outside [0,1]: x = " + std::to_string(double(x)));
    return std::clamp(x, Scalar(0), Scalar(1));
  }

  bool operator==(const KnotVector& o) const {
    return degree_ == o.degree_ && knots_ == o.knots_;
  }

 private:
  std::vector<Scalar> knots_;
  int degree_;
};

template <typename Scalar>
struct BasisValues {
  int first = 0;  ///< global index of the first returned function
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
};

template <typename Scalar>
struct BasisDerivatives {
  int first = 0;
  /// ders(k, j): k-th derivative of function first + j.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ders;
};

/// The p+1 possibly nonzero basis values at x (Cox-de Boor, triangular form).
template <typename Scalar>
BasisValues<Scalar> eval_basis(const KnotVector<Scalar>& kv, Scalar x) {
  x = KnotVector<Scalar>::checked(x);
  const int p = kv.degree();
  const int mu = kv.find_span(x);
  const auto& U = kv.knots();
  BasisValues<Scalar> out;
  out.first = mu - p;
  out.values.setZero(p + 1);
  out.values[0] = Scalar(1);
  std::vector<Scalar> left(p + 1), right(p + 1);
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[mu + 1 - j];
    right[j] = U[mu + j] - x;
    Scalar saved = 0;
    for (int r = 0; r < j; ++r) {
      const Scalar tmp = out.values[r] / (right[r + 1] + left[j - r]);
      out.values[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    out.values[j] = saved;
  }
  return out;
}

/// Basis values and derivatives up to `order` (order <= p).
template <typename Scalar>
BasisDerivatives<Scalar> eval_basis_derivatives(const KnotVector<Scalar>& kv, Scalar x,
                                                int order) {
  const int p = kv.degree();
  if (order < 0 || order > p)
    throw DegreeError("derivative order " + std::to_string(order) + " exceeds degree " +
                      std::to_string(p));
  x = KnotVector<Scalar>::checked(x);
  const int mu = kv.find_span(x);
  const auto& U = kv.knots();
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat ndu(p + 1, p + 1);
  std::vector<Scalar> left(p + 1), right(p + 1);
  ndu(0, 0) = Scalar(1);
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[mu + 1 - j];
    right[j] = U[mu + j] - x;
    Scalar saved = 0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const Scalar tmp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    ndu(j, j) = saved;
  }
  BasisDerivatives<Scalar> out;
  out.first = mu - p;
  out.ders.setZero(order + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);
  Mat a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = Scalar(1);
    for (int k = 1; k <= order; ++k) {
      Scalar d = 0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out.ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  Scalar fac = p;
  for (int k = 1; k <= order; ++k) {
    out.ders.row(k) *= fac;
    fac *= Scalar(p - k);
  }
  return out;
}

/// Knot vector with the first and last knot removed: degree p-1, n-1
/// functions, one order less regularity at every knot.
template <typename Scalar>
KnotVector<Scalar> reduced_knotvector(const KnotVector<Scalar>& kv) {
  if (kv.degree() < 1) throw DegreeError("reduced knot vector requires degree >= 1");
  std::vector<Scalar> k(kv.knots().begin() + 1, kv.knots().end() - 1);
  return KnotVector<Scalar>(std::move(k), kv.degree() - 1);
}

/// Scale turning reduced basis function e of `reduced` into the
/// Curry-Schoenberg function D_e = p / (xi'_{e+p} - xi'_e) B'_e, so that
/// d/dx N_i = D_{i-1} - D_i holds with unit coefficients.
template <typename Scalar>
Scalar derivative_scale(const KnotVector<Scalar>& reduced, int e) {
  const int p = reduced.degree() + 1;
  return Scalar(p) / (reduced[e + p] - reduced[e]);
}

/// Trivariate tensor-product basis with lexicographic flat indexing
/// (first direction fastest).
template <typename Scalar = double>
class TensorBasis {
 public:
  explicit TensorBasis(std::array<KnotVector<Scalar>, 3> kv) : kv_(std::move(kv)) {}

  const KnotVector<Scalar>& direction(int d) const { return kv_[d]; }
  int count(int d) const { return kv_[d].size(); }
  std::array<int, 3> counts() const { return {count(0), count(1), count(2)}; }
  int dimension() const { return count(0) * count(1) * count(2); }
  int flat(int i, int j, int k) const { return i + count(0) * (j + count(1) * k); }
  std::array<int, 3> unflatten(int f) const {
    const int i = f % count(0);
    const int j = (f / count(0)) % count(1);
    return {i, j, f / (count(0) * count(1))};
  }

 private:
  std::array<KnotVector<Scalar>, 3> kv_;
};

}  // namespace isomortar

#endif  // ISOMORTAR_BSPLINE_HPP
