// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_QUADRATURE_HPP
#define ISOMORTAR_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "isomortar/errors.hpp"

namespace isomortar {

/// Gauss-Legendre points and weights on [0,1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// n-point rule, exact for polynomials of degree 2n-1.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss rule needs at least one point");
  GaussRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1);
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    r.points[i] = 0.5 * (1 - x);
    r.points[n - 1 - i] = 0.5 * (1 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

/// Tensor Gauss rule with per-direction point counts.
struct QuadratureRule {
  std::array<GaussRule, 3> rules;

  explicit QuadratureRule(std::array<int, 3> counts)
      : rules{gauss_legendre(counts[0]), gauss_legendre(counts[1]), gauss_legendre(counts[2])} {}
  int size() const { return rules[0].size() * rules[1].size() * rules[2].size(); }
};

}  // namespace isomortar

#endif  // ISOMORTAR_QUADRATURE_HPP
