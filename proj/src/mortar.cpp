// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/mortar.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

#include "isomortar/assembly.hpp"
#include "isomortar/quadrature.hpp"

namespace isomortar {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kMergeTol = 1e-12 * kTwoPi;

double wrap(double t) {
  t -= kTwoPi * std::floor(t / kTwoPi);
  return t >= kTwoPi ? 0.0 : t;
}

void sort_and_check(std::vector<ArcSpan>& spans, const char* side) {
  if (spans.empty()) throw GeometryError(std::string(side) + " interface has no arcs");
  std::sort(spans.begin(), spans.end(),
            [](const ArcSpan& a, const ArcSpan& b) { return a.arc.theta0 < b.arc.theta0; });
  double covered = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& a = spans[i].arc;
    const double next =
        i + 1 < spans.size() ? spans[i + 1].arc.theta0 : spans[0].arc.theta0 + kTwoPi;
    if (std::abs(a.theta1 - next) > kMergeTol)
      throw GeometryError(std::string(side) + " interface arcs leave a gap or overlap at angle " +
                          std::to_string(a.theta1));
    covered += a.theta1 - a.theta0;
  }
  if (std::abs(covered - kTwoPi) > kMergeTol)
    throw GeometryError(std::string(side) + " interface arcs do not cover the circle once");
}

/// Index of the span containing angle t (interface frame of that side).
int find_span(const std::vector<ArcSpan>& spans, double t) {
  t = wrap(t);
  for (int i = static_cast<int>(spans.size()) - 1; i >= 0; --i)
    if (wrap(t - spans[i].arc.theta0) < spans[i].arc.theta1 - spans[i].arc.theta0) return i;
  return 0;
}

std::vector<double> merge_sorted(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

/// Covariant value of an edge-space function's local basis at a point,
/// returned as cylindrical (theta, z) components.
struct TraceValues {
  std::vector<int> dof;
  std::vector<double> sign;
  std::vector<double> v_theta, v_z;
};

void side_trace(const EdgeSpace& space, int patch, const Vec3& xi, TraceValues& out) {
  const auto& ps = space.patch(patch);
  thread_local LocalEdgeBasis b;
  eval_reference_edge_basis(ps, xi, b);
  const JacobianInfo jac = jacobian(space.model().patches[patch], xi, patch);
  out.dof.clear();
  out.sign.clear();
  out.v_theta.clear();
  out.v_z.clear();
  for (std::size_t m = 0; m < b.local.size(); ++m) {
    const Vec3 v = jac.inverse_transpose * b.value[m];
    const auto [vr, vt] = cylindrical_components(jac.point, v);
    (void)vr;
    out.dof.push_back(ps.dof[b.local[m]]);
    out.sign.push_back(ps.sign[b.local[m]]);
    out.v_theta.push_back(vt);
    out.v_z.push_back(v.z());
  }
}

}  // namespace

std::vector<ArcSpan> interface_spans(const EdgeSpace& space, const std::string& tag) {
  const auto& model = space.model();
  std::vector<ArcSpan> spans;
  for (int p = 0; p < model.size(); ++p)
    for (int f = 0; f < 6; ++f) {
      if (model.boundary_tags[p][f] != tag) continue;
      ArcSpan s;
      s.patch = p;
      s.face = f;
      s.arc = interface_arc(model.patches[p], f);
      for (double x : space.patch(p).knots[1].breakpoints())
        s.angles.push_back(angle_of_parameter(s.arc, x));
      spans.push_back(std::move(s));
    }
  sort_and_check(spans, tag.c_str());
  return spans;
}

ArcSpan make_span(double theta0, double theta1, int elements) {
  ArcSpan s;
  s.arc = make_arc(Vec2::Zero(), 1.0, theta0, theta1);
  for (int i = 0; i <= elements; ++i)
    s.angles.push_back(angle_of_parameter(s.arc, static_cast<double>(i) / elements));
  return s;
}

double angle_in_span(const ArcSpan& span, double theta) {
  return span.arc.theta0 + wrap(theta - span.arc.theta0);
}

Vec3 span_reference_point(const ArcSpan& span, double theta, double zeta) {
  double t = angle_in_span(span, theta);
  if (t > span.arc.theta1 && t - kTwoPi > span.arc.theta0 - kMergeTol) t -= kTwoPi;
  return Vec3(face_side(span.face) ? 1.0 : 0.0, parameter_of_angle(span.arc, t), zeta);
}

MortarInterface build_intersection_mesh(std::vector<ArcSpan> stator, std::vector<ArcSpan> rotor,
                                        double alpha, std::vector<double> z_breakpoints,
                                        double radius, double z0, double length) {
  sort_and_check(stator, "stator");
  sort_and_check(rotor, "rotor");
  MortarInterface m;
  m.radius = radius;
  m.z0 = z0;
  m.length = length;
  m.alpha = wrap(alpha);
  std::vector<double> all;
  for (const auto& s : stator)
    for (double a : s.angles) all.push_back(wrap(a));
  for (const auto& s : rotor)
    for (double a : s.angles) all.push_back(wrap(a + m.alpha));
  auto merged = merge_sorted(all, kMergeTol);
  if (merged.size() > 1 && merged.back() > kTwoPi - kMergeTol + merged.front()) merged.pop_back();
  m.breakpoints = merged;
  m.z_breakpoints = merge_sorted(std::move(z_breakpoints), 1e-12);
  const int n = static_cast<int>(merged.size());
  for (int i = 0; i < n; ++i) {
    MortarCell c;
    c.theta0 = merged[i];
    c.theta1 = i + 1 < n ? merged[i + 1] : merged[0] + kTwoPi;
    const double mid = 0.5 * (c.theta0 + c.theta1);
    c.stator_span = find_span(stator, mid);
    c.rotor_span = find_span(rotor, mid - m.alpha);
    m.cells.push_back(c);
  }
  m.stator = std::move(stator);
  m.rotor = std::move(rotor);
  return m;
}

MortarInterface build_intersection_mesh(const EdgeSpace& stator, const EdgeSpace& rotor,
                                        const TraceSpace& trace, double alpha,
                                        const std::string& tag) {
  auto ss = interface_spans(stator, tag);
  auto rs = interface_spans(rotor, tag);
  if (std::abs(ss.front().arc.radius - rs.front().arc.radius) > 1e-12 * trace.radius())
    throw GeometryError("rotor and stator interface radii differ");
  std::vector<double> zb;
  auto add_z = [&](const EdgeSpace& space, const std::vector<ArcSpan>& spans) {
    for (const auto& s : spans) {
      const auto& patch = space.model().patches[s.patch];
      const double za = patch.evaluate(face_point(s.face, 0, 0)).z();
      const double zc = patch.evaluate(face_point(s.face, 0, 1)).z();
      if (std::abs(za - trace.z0()) > 1e-12 * trace.length() ||
          std::abs(zc - za - trace.length()) > 1e-12 * trace.length())
        throw GeometryError("interface faces do not share the axial extent");
      for (double x : space.patch(s.patch).knots[2].breakpoints()) zb.push_back(x);
    }
  };
  add_z(stator, ss);
  add_z(rotor, rs);
  for (std::size_t i = 0; i < ss.size(); ++i)
    if (ss[i].patch != trace.arcs()[i].patch)
      throw InternalError("stator spans and trace arcs are ordered differently");
  return build_intersection_mesh(std::move(ss), std::move(rs), alpha, std::move(zb),
                                 trace.radius(), trace.z0(), trace.length());
}

Coupling assemble_coupling(const MortarInterface& mesh, const EdgeSpace& stator,
                           const EdgeSpace& rotor, const TraceSpace& trace,
                           const CouplingOptions& options) {
  const int p = std::max(stator.degree(), rotor.degree());
  const GaussRule gt = gauss_legendre(options.theta_points > 0 ? options.theta_points
                                                               : std::max(p, trace.degree()) + 2);
  const GaussRule gz = gauss_legendre(options.z_points > 0 ? options.z_points : p + 2);
  const int sub = std::max(1, options.subdivide);
  const int nc = mesh.num_cells();
  using Triplets = std::vector<Eigen::Triplet<double>>;
  std::vector<Triplets> ts(nc), tr(nc);

  auto cell_work = [&](int c) {
    const auto& cell = mesh.cells[c];
    const auto& s_span = mesh.stator[cell.stator_span];
    const auto& r_span = mesh.rotor[cell.rotor_span];
    std::vector<TraceBasisValue> mu;
    TraceValues vs, vr;
    for (int piece = 0; piece < sub; ++piece) {
      const double a = cell.theta0 + (cell.theta1 - cell.theta0) * piece / sub;
      const double b = cell.theta0 + (cell.theta1 - cell.theta0) * (piece + 1) / sub;
      for (std::size_t zc = 0; zc + 1 < mesh.z_breakpoints.size(); ++zc) {
        const double za = mesh.z_breakpoints[zc], zb = mesh.z_breakpoints[zc + 1];
        for (int iz = 0; iz < gz.size(); ++iz)
          for (int it = 0; it < gt.size(); ++it) {
            const double theta = a + (b - a) * gt.points[it];
            const double zeta = za + (zb - za) * gz.points[iz];
            const double w = gt.weights[it] * (b - a) * gz.weights[iz] * (zb - za) * mesh.length *
                             mesh.radius;
            Vec3 xs, xr;
            try {
              xs = span_reference_point(s_span, theta, zeta);
              xr = span_reference_point(r_span, theta - mesh.alpha, zeta);
            } catch (const DomainError& e) {
              throw GeometryError("mortar cell " + std::to_string(c) +
                                  ": preimage inversion failed: " + e.what());
            }
            trace.evaluate(cell.stator_span, xs[1], zeta, mu);
            side_trace(stator, s_span.patch, xs, vs);
            side_trace(rotor, r_span.patch, xr, vr);
            for (const auto& m : mu) {
              for (std::size_t k = 0; k < vs.dof.size(); ++k) {
                const double val = vs.v_theta[k] * m.mu_theta + vs.v_z[k] * m.mu_z;
                if (val != 0) ts[c].emplace_back(m.dof, vs.dof[k], w * vs.sign[k] * val);
              }
              for (std::size_t k = 0; k < vr.dof.size(); ++k) {
                const double val = vr.v_theta[k] * m.mu_theta + vr.v_z[k] * m.mu_z;
                if (val != 0) tr[c].emplace_back(m.dof, vr.dof[k], -w * vr.sign[k] * val);
              }
            }
          }
      }
    }
  };

  const int threads = std::max(1, std::min(options.threads, nc));
  if (threads == 1) {
    for (int c = 0; c < nc; ++c) cell_work(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (int c = t; c < nc; c += threads) cell_work(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  Triplets all_s, all_r;
  for (int c = 0; c < nc; ++c) {
    all_s.insert(all_s.end(), ts[c].begin(), ts[c].end());
    all_r.insert(all_r.end(), tr[c].begin(), tr[c].end());
  }
  Coupling out;
  out.stator.resize(trace.num_dofs(), stator.num_dofs());
  out.stator.setFromTriplets(all_s.begin(), all_s.end());
  out.rotor.resize(trace.num_dofs(), rotor.num_dofs());
  out.rotor.setFromTriplets(all_r.begin(), all_r.end());
  return out;
}

MultiplierValue evaluate_multiplier(const TraceSpace& trace, const Eigen::VectorXd& lambda,
                                    double theta, double z) {
  if (lambda.size() != trace.num_dofs())
    throw DomainError("multiplier vector has wrong length");
  const double zeta = (z - trace.z0()) / trace.length();
  if (!(zeta >= -1e-12 && zeta <= 1 + 1e-12))
    throw DomainError("multiplier evaluation: z = " + std::to_string(z) + " outside the interface");
  const auto& arcs = trace.arcs();
  theta = wrap(theta);
  int a = static_cast<int>(arcs.size()) - 1;
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    if (wrap(theta - arcs[i].arc.theta0) < arcs[i].arc.theta1 - arcs[i].arc.theta0) {
      a = i;
      break;
    }
  double t = arcs[a].arc.theta0 + wrap(theta - arcs[a].arc.theta0);
  t = std::min(t, arcs[a].arc.theta1);
  const double xi = parameter_of_angle(arcs[a].arc, t);
  std::vector<TraceBasisValue> mu;
  trace.evaluate(a, xi, std::clamp(zeta, 0.0, 1.0), mu);
  MultiplierValue out;
  for (const auto& m : mu) {
    out.theta += lambda[m.dof] * m.mu_theta;
    out.z += lambda[m.dof] * m.mu_z;
  }
  return out;
}

void write_cells(std::ostream& out, const MortarInterface& mesh) {
  out << "# alpha " << std::setprecision(17) << mesh.alpha << "\n# cells " << mesh.num_cells()
      << "\n# theta0 theta1 stator_span rotor_span xi_stator0 xi_stator1 xi_rotor0 xi_rotor1\n";
  for (const auto& c : mesh.cells) {
    const auto& s = mesh.stator[c.stator_span];
    const auto& r = mesh.rotor[c.rotor_span];
    const double eps = 1e-14;
    out << c.theta0 << ' ' << c.theta1 << ' ' << c.stator_span << ' ' << c.rotor_span << ' '
        << span_reference_point(s, c.theta0 + eps, 0)[1] << ' '
        << span_reference_point(s, c.theta1 - eps, 0)[1] << ' '
        << span_reference_point(r, c.theta0 - mesh.alpha + eps, 0)[1] << ' '
        << span_reference_point(r, c.theta1 - mesh.alpha - eps, 0)[1] << '\n';
  }
}

}  // namespace isomortar
