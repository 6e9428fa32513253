// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

// Planar Fourier-harmonic solution of the slotless machine: per harmonic
// n the layered radial problem -nu (A'' + A'/r - n^2 A / r^2) = s(r) with
// A = 0 on the shaft and the stator outer radius, A and nu A' continuous
// across layer boundaries.

#ifndef ISOMORTAR_TESTS_HARMONIC_ORACLE_HPP
#define ISOMORTAR_TESTS_HARMONIC_ORACLE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

struct SlotlessMachine {
  std::vector<double> radii;  // layer boundaries, increasing
  std::vector<double> nu;     // per layer
  int magnet_layer = 1;
  int winding_layer = 3;
  double magnetization = 0;   // A/m, pole 0 points outward
  int pole_pairs = 1;
  double magnet_half_width = 0;
  std::vector<double> belt_edges;    // belt k spans [edges[k], edges[k+1]]
  std::vector<double> belt_current;  // A/m^2
  double gap_radius = 0;
  double length = 0;
};

struct Harmonic {
  Eigen::VectorXd a, b;  // homogeneous coefficients per layer
  double src_magnet = 0, src_winding = 0;
};

class Solution {
 public:
  Solution(const SlotlessMachine& m, double alpha, int max_harmonic) : m_(m) {
    for (int n = 1; n <= max_harmonic; ++n) {
      double mc = 0, ms = 0;
      const int p = m.pole_pairs;
      if (n % p == 0 && (n / p) % 2 == 1) {
        const double c = 4.0 * p / (n * std::numbers::pi) * std::sin(n * m.magnet_half_width);
        // -(1/r) d/dtheta of M c cos(n(theta - alpha))
        const double b = m.magnetization * n * c;
        mc = -b * std::sin(n * alpha);
        ms = b * std::cos(n * alpha);
      }
      double jc = 0, js = 0;
      for (std::size_t k = 0; k + 1 < m.belt_edges.size(); ++k) {
        const double t0 = m.belt_edges[k], t1 = m.belt_edges[k + 1];
        jc += m.belt_current[k] * (std::sin(n * t1) - std::sin(n * t0)) / (n * std::numbers::pi);
        js += m.belt_current[k] * (std::cos(n * t0) - std::cos(n * t1)) / (n * std::numbers::pi);
      }
      cos_.push_back(solve(n, mc, jc));
      sin_.push_back(solve(n, ms, js));
    }
  }

  /// A_z at (r, theta).
  double potential(double r, double theta) const {
    double v = 0;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const int n = static_cast<int>(i) + 1;
      v += value(n, cos_[i], r, 0) * std::cos(n * theta) + value(n, sin_[i], r, 0) * std::sin(n * theta);
    }
    return v;
  }

  /// Maxwell-stress torque on the circle of radius r inside the air gap.
  double torque(double r) const {
    const double nu0 = m_.nu[layer(r)];
    double sum = 0;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const int n = static_cast<int>(i) + 1;
      const double ac = value(n, cos_[i], r, 0), as = value(n, sin_[i], r, 0);
      const double dac = value(n, cos_[i], r, 1), das = value(n, sin_[i], r, 1);
      const double br_c = n * as / r, br_s = -n * ac / r;
      sum += br_c * (-dac) + br_s * (-das);
    }
    return nu0 * m_.length * r * r * std::numbers::pi * sum;
  }

 private:
  int layer(double r) const {
    int l = 0;
    while (l + 2 < static_cast<int>(m_.radii.size()) && r > m_.radii[l + 1]) ++l;
    return l;
  }

  // particular solution (d = 0) or its derivative (d = 1)
  double particular(int n, int l, const Harmonic& h, double r, int d) const {
    const double nu = m_.nu[l];
    double v = 0;
    if (l == m_.magnet_layer && h.src_magnet != 0) {
      const double b = h.src_magnet;
      if (n == 1) {
        const double c = -b / (2 * nu);
        v += d == 0 ? c * r * std::log(r) : c * (std::log(r) + 1);
      } else {
        const double c = b / (nu * (n * n - 1));
        v += d == 0 ? c * r : c;
      }
    }
    if (l == m_.winding_layer && h.src_winding != 0) {
      const double a = h.src_winding;
      if (n == 2) {
        const double c = -a / (4 * nu);
        v += d == 0 ? c * r * r * std::log(r) : c * (2 * r * std::log(r) + r);
      } else {
        const double c = a / (nu * (n * n - 4));
        v += d == 0 ? c * r * r : 2 * c * r;
      }
    }
    return v;
  }

  double homogeneous(int n, int l, const Harmonic& h, double r, int d) const {
    const double ri = m_.radii[l], ro = m_.radii[l + 1];
    const double up = std::pow(r / ro, n), down = std::pow(ri / r, n);
    if (d == 0) return h.a[l] * up + h.b[l] * down;
    return h.a[l] * n * up / r - h.b[l] * n * down / r;
  }

  double value(int n, const Harmonic& h, double r, int d) const {
    const int l = layer(r);
    return homogeneous(n, l, h, r, d) + particular(n, l, h, r, d);
  }

  Harmonic solve(int n, double src_magnet, double src_winding) const {
    const int layers = static_cast<int>(m_.radii.size()) - 1;
    Harmonic h;
    h.src_magnet = src_magnet;
    h.src_winding = src_winding;
    h.a = Eigen::VectorXd::Zero(layers);
    h.b = Eigen::VectorXd::Zero(layers);
    if (src_magnet == 0 && src_winding == 0) return h;
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(2 * layers, 2 * layers);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * layers);
    Harmonic zero = h;
    auto unit = [&](int l, int which) {
      Harmonic u = zero;
      u.src_magnet = u.src_winding = 0;
      (which == 0 ? u.a : u.b)[l] = 1;
      return u;
    };
    int row = 0;
    // A(r_0) = 0
    for (int w = 0; w < 2; ++w) mat(row, w) = homogeneous(n, 0, unit(0, w), m_.radii[0], 0);
    rhs[row++] = -particular(n, 0, h, m_.radii[0], 0);
    for (int l = 0; l + 1 < layers; ++l) {
      const double r = m_.radii[l + 1];
      for (int d = 0; d < 2; ++d) {
        const double sl = d == 0 ? 1 : m_.nu[l];
        const double sr = d == 0 ? 1 : m_.nu[l + 1];
        for (int w = 0; w < 2; ++w) {
          mat(row, 2 * l + w) = sl * homogeneous(n, l, unit(l, w), r, d);
          mat(row, 2 * (l + 1) + w) = -sr * homogeneous(n, l + 1, unit(l + 1, w), r, d);
        }
        rhs[row++] = sr * particular(n, l + 1, h, r, d) - sl * particular(n, l, h, r, d);
      }
    }
    const int last = layers - 1;
    for (int w = 0; w < 2; ++w)
      mat(row, 2 * last + w) = homogeneous(n, last, unit(last, w), m_.radii[layers], 0);
    rhs[row++] = -particular(n, last, h, m_.radii[layers], 0);
    const Eigen::VectorXd x = mat.fullPivLu().solve(rhs);
    for (int l = 0; l < layers; ++l) {
      h.a[l] = x[2 * l];
      h.b[l] = x[2 * l + 1];
    }
    return h;
  }

  SlotlessMachine m_;
  std::vector<Harmonic> cos_, sin_;
};

}  // namespace oracle

#endif  // ISOMORTAR_TESTS_HARMONIC_ORACLE_HPP
