// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "isomortar/mortar.hpp"
#include "models.hpp"

using namespace isomortar;
using std::numbers::pi;

namespace {

std::vector<ArcSpan> uniform_spans(int n) {
  std::vector<ArcSpan> s;
  for (int k = 0; k < n; ++k) s.push_back(make_span(2 * pi * k / n, 2 * pi * (k + 1) / n, 1));
  return s;
}

double max_abs(const SparseMatrix& m) {
  double v = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

Mat3 rotation(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

struct Setup {
  testing::RingPair models;
  EdgeSpace rotor, stator;
  TraceSpace trace;
};

Setup setup(int p = 2, int q = 1) {
  auto m = testing::ring_pair(0.02, 0.045, 0.07, 4, {1, 3, 2}, 6, {1, 2, 2}, 0.1);
  return {m, build_edge_space(m.rotor, p), build_edge_space(m.stator, p),
          build_trace_space(*m.stator, "interface", p, q)};
}

}  // namespace

TEST_CASE("intersection mesh cell counts") {
  const auto a = build_intersection_mesh(uniform_spans(4), uniform_spans(3), 0, {0, 1});
  CHECK(a.num_cells() == 6);
  const auto b = build_intersection_mesh(uniform_spans(4), uniform_spans(3), pi / 12, {0, 1});
  CHECK(b.num_cells() == 7);
  const auto c = build_intersection_mesh(uniform_spans(4), uniform_spans(3), 2 * pi / 3, {0, 1});
  REQUIRE(c.num_cells() == a.num_cells());
  for (int i = 0; i < a.num_cells(); ++i) {
    CHECK(c.cells[i].theta0 == doctest::Approx(a.cells[i].theta0));
    CHECK(c.cells[i].stator_span == a.cells[i].stator_span);
  }
  for (const auto* m : {&a, &b, &c}) {
    double total = 0;
    for (const auto& cell : m->cells) {
      CHECK(cell.theta1 > cell.theta0);
      total += cell.theta1 - cell.theta0;
    }
    CHECK(std::abs(total - 2 * pi) <= 1e-12);
    for (std::size_t i = 1; i < m->breakpoints.size(); ++i)
      CHECK(m->breakpoints[i] > m->breakpoints[i - 1]);
  }
}

TEST_CASE("each cell lies inside one span per side") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<ArcSpan> stator, rotor;
  for (int k = 0; k < 6; ++k) stator.push_back(make_span(k * pi / 3, (k + 1) * pi / 3, 3));
  for (int k = 0; k < 4; ++k) rotor.push_back(make_span(k * pi / 2, (k + 1) * pi / 2, 5));
  for (int t = 0; t < 20; ++t) {
    const double alpha = u(rng);
    const auto m = build_intersection_mesh(stator, rotor, alpha, {0, 1});
    CHECK(m.alpha >= 0);
    CHECK(m.alpha < 2 * pi);
    for (const auto& cell : m.cells) {
      const double mid = 0.5 * (cell.theta0 + cell.theta1);
      const auto& s = m.stator[cell.stator_span];
      const auto& r = m.rotor[cell.rotor_span];
      const double ts = angle_in_span(s, mid), tr = angle_in_span(r, mid - m.alpha);
      CHECK(ts <= s.arc.theta1);
      CHECK(tr <= r.arc.theta1);
      // no knot image strictly inside the cell
      const double w = cell.theta1 - cell.theta0;
      for (double k : s.angles) CHECK(!(std::abs(k - ts) < 0.5 * w - 1e-12));
      for (double k : r.angles) CHECK(!(std::abs(k - tr) < 0.5 * w - 1e-12));
    }
  }
}

TEST_CASE("coverage errors") {
  auto gap = uniform_spans(4);
  gap.pop_back();
  CHECK_THROWS_AS(build_intersection_mesh(gap, uniform_spans(3), 0, {0, 1}), GeometryError);
  auto overlap = uniform_spans(3);
  overlap.push_back(make_span(0.1, 0.2, 1));
  CHECK_THROWS_AS(build_intersection_mesh(uniform_spans(4), overlap, 0, {0, 1}), GeometryError);
}

TEST_CASE("uniform axial field has no jump") {
  const auto s = setup();
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  // knot-coincident angles first: multiples of the rotor element width
  std::vector<double> angles{0, pi / 6, pi / 2};
  while (angles.size() < 10) angles.push_back(u(rng));
  const Eigen::VectorXd us = interpolate_field(s.stator, [](const Vec3&) { return Vec3(0, 0, 0.7); });
  const Eigen::VectorXd ur = interpolate_field(s.rotor, [](const Vec3&) { return Vec3(0, 0, 0.7); });
  const double scale = std::sqrt(us.squaredNorm() + ur.squaredNorm());
  for (double alpha : angles) {
    const auto mesh = build_intersection_mesh(s.stator, s.rotor, s.trace, alpha);
    const auto c = assemble_coupling(mesh, s.stator, s.rotor, s.trace);
    CHECK((c.stator * us + c.rotor * ur).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("in-plane uniform field jump converges") {
  // x and y are rational on the arcs, so the jump is interpolation error
  const Vec3 c0(0.3, -0.2, 0);
  const double alpha = 0.37;
  const Mat3 q = rotation(alpha);
  std::vector<double> jumps;
  for (int n : {1, 2, 4}) {
    auto m = testing::ring_pair(0.02, 0.045, 0.07, 4, {1, 3 * n, 2}, 6, {1, 2 * n, 2}, 0.1);
    const auto rs = build_edge_space(m.rotor, 2), ss = build_edge_space(m.stator, 2);
    const auto trace = build_trace_space(*m.stator, "interface", 2, 1);
    const auto c = assemble_coupling(build_intersection_mesh(ss, rs, trace, alpha), ss, rs, trace);
    const Eigen::VectorXd us = interpolate_field(ss, [&](const Vec3&) { return c0; });
    const Eigen::VectorXd ur = interpolate_field(rs, [&](const Vec3&) { return Vec3(q.transpose() * c0); });
    jumps.push_back((c.stator * us + c.rotor * ur).norm() / std::sqrt(us.squaredNorm() + ur.squaredNorm()));
  }
  for (std::size_t i = 1; i < jumps.size(); ++i) CHECK(std::log2(jumps[i - 1] / jumps[i]) >= 2.0);
}

TEST_CASE("matching discretizations at zero angle") {
  auto m = testing::ring_pair(0.02, 0.045, 0.07, 6, {1, 2, 1}, 6, {1, 2, 1}, 0.1);
  const auto rs = build_edge_space(m.rotor, 2), ss = build_edge_space(m.stator, 2);
  const auto trace = build_trace_space(*m.stator, "interface", 2, 1);
  const VectorField f = [](const Vec3& x) {
    return Vec3(std::sin(20 * x.y()), x.x() * x.z(), std::cos(30 * x.x()) + x.y());
  };
  const Eigen::VectorXd us = interpolate_field(ss, f), ur = interpolate_field(rs, f);
  const auto c = assemble_coupling(build_intersection_mesh(ss, rs, trace, 0), ss, rs, trace);
  const Eigen::VectorXd jump = c.stator * us + c.rotor * ur;
  CHECK(jump.norm() <= 1e-12 * std::sqrt(us.squaredNorm() + ur.squaredNorm()));
  CHECK((c.stator * us).norm() > 1e-6 * us.norm());
}

TEST_CASE("coupling against over-resolved quadrature") {
  // 15 degree elements on the rotor, 15 on the stator
  auto m = testing::ring_pair(0.02, 0.045, 0.07, 4, {1, 6, 2}, 6, {1, 4, 2}, 0.1);
  const auto rs = build_edge_space(m.rotor, 2), ss = build_edge_space(m.stator, 2);
  const auto trace = build_trace_space(*m.stator, "interface", 2, 1);
  for (double alpha : {0.37, 2.9}) {
    const auto mesh = build_intersection_mesh(ss, rs, trace, alpha);
    const auto c = assemble_coupling(mesh, ss, rs, trace);
    CouplingOptions fine;
    fine.subdivide = 4;
    fine.theta_points = 3 * (2 + 2);
    fine.z_points = 3 * (2 + 2);
    const auto r = assemble_coupling(mesh, ss, rs, trace, fine);
    CHECK(max_abs(c.stator - r.stator) <= 1e-9);
    CHECK(max_abs(c.rotor - r.rotor) <= 1e-9);
  }
}

TEST_CASE("splitting cells reproduces the coupling") {
  auto m = testing::ring_pair(0.02, 0.045, 0.07, 4, {1, 24, 1}, 6, {1, 16, 1}, 0.1);
  const auto rs = build_edge_space(m.rotor, 2), ss = build_edge_space(m.stator, 2);
  const auto trace = build_trace_space(*m.stator, "interface", 2, 1);
  const auto mesh = build_intersection_mesh(ss, rs, trace, 0.37);
  const auto c = assemble_coupling(mesh, ss, rs, trace);
  CouplingOptions split;
  split.subdivide = 2;
  const auto h = assemble_coupling(mesh, ss, rs, trace, split);
  CHECK(max_abs(c.stator - h.stator) <= 1e-12 * max_abs(c.stator));
  CHECK(max_abs(c.rotor - h.rotor) <= 1e-12 * max_abs(c.rotor));
}

TEST_CASE("coupling sparsity and signs") {
  const auto s = setup();
  const auto mesh = build_intersection_mesh(s.stator, s.rotor, s.trace, 1.1);
  const auto c = assemble_coupling(mesh, s.stator, s.rotor, s.trace);
  CHECK(c.stator.rows() == s.trace.num_dofs());
  CHECK(c.rotor.rows() == s.trace.num_dofs());
  CHECK(c.stator.cols() == s.stator.num_dofs());
  CHECK(c.rotor.cols() == s.rotor.num_dofs());
  // only edges with a tangential trace carry weight
  const auto bs = apply_essential_bc(s.stator, {"interface"});
  const double top = max_abs(c.stator);
  for (int k = 0; k < c.stator.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(c.stator, k); it; ++it)
      if (!bs.constrained[it.col()]) CHECK(std::abs(it.value()) <= 1e-14 * top);
  // same field on both sides: the blocks cancel
  const Eigen::VectorXd us = interpolate_field(s.stator, [](const Vec3&) { return Vec3(0, 0, 1); });
  const Eigen::VectorXd ur = interpolate_field(s.rotor, [](const Vec3&) { return Vec3(0, 0, 1); });
  CHECK((c.stator * us).norm() > 0);
  CHECK((c.stator * us + c.rotor * ur).norm() <= 1e-12 * (c.stator * us).norm());
  const Eigen::VectorXd axial = c.stator * us;
  for (int j = s.trace.num_theta_edges(); j < s.trace.num_dofs(); ++j)
    CHECK(std::abs(axial[j]) <= 1e-14 * axial.norm());
}

TEST_CASE("2 pi equivariance") {
  const auto s = setup();
  const auto a = build_intersection_mesh(s.stator, s.rotor, s.trace, 0.9);
  const auto b = build_intersection_mesh(s.stator, s.rotor, s.trace, 0.9 + 2 * pi);
  REQUIRE(a.num_cells() == b.num_cells());
  const auto ca = assemble_coupling(a, s.stator, s.rotor, s.trace);
  const auto cb = assemble_coupling(b, s.stator, s.rotor, s.trace);
  CHECK(max_abs(ca.stator - cb.stator) <= 1e-15 * max_abs(ca.stator));
  CHECK(max_abs(ca.rotor - cb.rotor) <= 1e-13 * max_abs(ca.rotor));
}

TEST_CASE("thread count does not change the coupling") {
  const auto s = setup();
  const auto mesh = build_intersection_mesh(s.stator, s.rotor, s.trace, 0.4);
  CouplingOptions one, four;
  four.threads = 4;
  const auto a = assemble_coupling(mesh, s.stator, s.rotor, s.trace, one);
  const auto b = assemble_coupling(mesh, s.stator, s.rotor, s.trace, four);
  CHECK(max_abs(a.stator - b.stator) == 0.0);
  CHECK(max_abs(a.rotor - b.rotor) == 0.0);
}

TEST_CASE("multiplier evaluation") {
  const auto s = setup();
  const auto& t = s.trace;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(t.num_dofs());
  const auto z0 = evaluate_multiplier(t, zero, 1.0, 0.05);
  CHECK(z0.theta == 0.0);
  CHECK(z0.z == 0.0);
  CHECK_THROWS_AS(evaluate_multiplier(t, zero, 1.0, 0.3), DomainError);

  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const int arc = trial % t.arcs().size();
    const double xi = u(rng), zeta = u(rng);
    const double theta = angle_of_parameter(t.arcs()[arc].arc, xi);
    std::vector<TraceBasisValue> basis;
    t.evaluate(arc, xi, zeta, basis);
    for (const auto& b : basis) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(t.num_dofs());
      e[b.dof] = 1;
      const auto v = evaluate_multiplier(t, e, theta, t.z0() + zeta * t.length());
      CHECK(v.theta == doctest::Approx(b.mu_theta).epsilon(1e-10));
      CHECK(v.lambda3() == doctest::Approx(b.mu_z).epsilon(1e-10));
    }
  }
}

TEST_CASE("cell dump") {
  const auto m = build_intersection_mesh(uniform_spans(4), uniform_spans(3), pi / 12, {0, 1});
  std::ostringstream out;
  write_cells(out, m);
  int rows = 0;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 7);
}
