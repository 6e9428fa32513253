// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "isomortar/quadrature.hpp"

namespace isomortar {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Element {
  int patch;
  std::array<double, 3> lo, hi;
};

std::vector<Element> elements_of(const EdgeSpace& space, const std::vector<int>& patches) {
  std::vector<Element> out;
  auto add = [&](int p) {
    const auto& ps = space.patch(p);
    std::array<std::vector<double>, 3> bp;
    for (int d = 0; d < 3; ++d) bp[d] = ps.knots[d].breakpoints();
    for (std::size_t k = 0; k + 1 < bp[2].size(); ++k)
      for (std::size_t j = 0; j + 1 < bp[1].size(); ++j)
        for (std::size_t i = 0; i + 1 < bp[0].size(); ++i)
          out.push_back({p, {bp[0][i], bp[1][j], bp[2][k]}, {bp[0][i + 1], bp[1][j + 1], bp[2][k + 1]}});
  };
  if (patches.empty())
    for (int p = 0; p < space.num_patches(); ++p) add(p);
  else
    for (int p : patches) add(p);
  return out;
}

/// Runs body(e) for every element index, statically partitioned.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int e = 0; e < n; ++e) body(e);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int e = t; e < n; e += threads) body(e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

struct PointData {
  double weight;  // includes |det J|
  Vec3 x;
  std::vector<Vec3> value, curl;
};

/// Physical basis values at every Gauss point of an element; `local` gets
/// the element's local dofs (fixed across the element).
void element_points(const EdgeSpace& space, const Element& el, const QuadratureRule& rule,
                    std::vector<int>& local, std::vector<PointData>& pts) {
  const auto& ps = space.patch(el.patch);
  const auto& patch = space.model().patches[el.patch];
  LocalEdgeBasis b;
  pts.clear();
  const auto& r = rule.rules;
  const double vol = (el.hi[0] - el.lo[0]) * (el.hi[1] - el.lo[1]) * (el.hi[2] - el.lo[2]);
  for (int k = 0; k < r[2].size(); ++k)
    for (int j = 0; j < r[1].size(); ++j)
      for (int i = 0; i < r[0].size(); ++i) {
        const Vec3 xi(el.lo[0] + (el.hi[0] - el.lo[0]) * r[0].points[i],
                      el.lo[1] + (el.hi[1] - el.lo[1]) * r[1].points[j],
                      el.lo[2] + (el.hi[2] - el.lo[2]) * r[2].points[k]);
        eval_reference_edge_basis(ps, xi, b);
        const JacobianInfo jac = jacobian(patch, xi, el.patch);
        PointData pd;
        pd.weight = r[0].weights[i] * r[1].weights[j] * r[2].weights[k] * vol * jac.determinant;
        pd.x = jac.point;
        pd.value.resize(b.local.size());
        pd.curl.resize(b.local.size());
        for (std::size_t m = 0; m < b.local.size(); ++m) {
          const auto pf = push_forward_curl_conforming(jac, b.value[m], b.curl[m]);
          pd.value[m] = pf.value;
          pd.curl[m] = pf.curl;
        }
        pts.push_back(std::move(pd));
      }
  local = b.local;
}

int default_points(const EdgeSpace& space, int points) {
  return points > 0 ? points : space.degree() + 2;
}

}  // namespace

double Materials::nu(const std::string& material) const {
  const auto it = reluctivity.find(material);
  if (it == reluctivity.end()) throw ConfigError("no reluctivity for material '" + material + "'");
  return it->second;
}

Materials Materials::machine(double iron_relative_permeability) {
  Materials m;
  const double nu0 = 1 / kMu0;
  for (const char* name : {"airgap", "magnet", "winding", "air"}) m.reluctivity[name] = nu0;
  m.reluctivity["rotor_iron"] = nu0 / iron_relative_permeability;
  m.reluctivity["stator_iron"] = nu0 / iron_relative_permeability;
  return m;
}

Materials Materials::uniform(const MultipatchModel& model, double nu) {
  Materials m;
  for (const auto& r : model.regions) m.reluctivity[r.material] = nu;
  return m;
}

Vec3 region_magnetization(const Region& region, const Vec3& x) {
  Vec3 m = region.uniform_magnetization;
  if (region.radial_magnetization != 0) {
    const double r = std::hypot(x.x(), x.y());
    m += region.radial_magnetization * Vec3(x.x() / r, x.y() / r, 0);
  }
  return m;
}

SparseMatrix assemble_stiffness(const EdgeSpace& space, const Materials& materials,
                                const AssemblyOptions& options) {
  const auto els = elements_of(space, {});
  const int q = default_points(space, options.points);
  const QuadratureRule rule({q, q, q});
  std::vector<Triplets> per(els.size());
  parallel_for(static_cast<int>(els.size()), options.threads, [&](int e) {
    const auto& el = els[e];
    const auto& ps = space.patch(el.patch);
    const double nu = materials.nu(space.model().regions[el.patch].material);
    std::vector<int> local;
    std::vector<PointData> pts;
    element_points(space, el, rule, local, pts);
    const int n = static_cast<int>(local.size());
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd c(3, n);
    for (const auto& pd : pts) {
      for (int m = 0; m < n; ++m) c.col(m) = pd.curl[m];
      ke.noalias() += (nu * pd.weight) * c.transpose() * c;
    }
    auto& t = per[e];
    t.reserve(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        t.emplace_back(ps.dof[local[a]], ps.dof[local[b]],
                       ps.sign[local[a]] * ps.sign[local[b]] * ke(a, b));
  });
  Triplets all;
  for (auto& t : per) all.insert(all.end(), t.begin(), t.end());
  SparseMatrix k(space.num_dofs(), space.num_dofs());
  k.setFromTriplets(all.begin(), all.end());
  return k;
}

Eigen::VectorXd assemble_rhs(const EdgeSpace& space, const Materials& materials,
                             const AssemblyOptions& options, const VectorField& extra_current) {
  (void)materials;
  const auto els = elements_of(space, {});
  const int q = default_points(space, options.points);
  const QuadratureRule rule({q, q, q});
  std::vector<std::vector<std::pair<int, double>>> per(els.size());
  parallel_for(static_cast<int>(els.size()), options.threads, [&](int e) {
    const auto& el = els[e];
    const Region& region = space.model().regions[el.patch];
    const bool has_m = region.radial_magnetization != 0 || region.uniform_magnetization.norm() > 0;
    const bool has_j = region.axial_current_density != 0 || extra_current;
    if (!has_m && !has_j) return;
    const auto& ps = space.patch(el.patch);
    std::vector<int> local;
    std::vector<PointData> pts;
    element_points(space, el, rule, local, pts);
    std::vector<double> fe(local.size(), 0.0);
    for (const auto& pd : pts) {
      Vec3 j(0, 0, region.axial_current_density);
      if (extra_current) j += extra_current(pd.x);
      const Vec3 m = region_magnetization(region, pd.x);
      for (std::size_t a = 0; a < local.size(); ++a)
        fe[a] += pd.weight * (j.dot(pd.value[a]) + m.dot(pd.curl[a]));
    }
    for (std::size_t a = 0; a < local.size(); ++a)
      per[e].emplace_back(ps.dof[local[a]], ps.sign[local[a]] * fe[a]);
  });
  Eigen::VectorXd f = Eigen::VectorXd::Zero(space.num_dofs());
  for (const auto& v : per)
    for (auto [i, x] : v) f[i] += x;
  return f;
}

FieldSample evaluate_fields(const EdgeSpace& space, const Eigen::VectorXd& coeffs,
                            const Materials& materials, int patch, const Vec3& xi) {
  const FieldEvaluator ev(space, coeffs);
  const auto s = ev(patch, xi);
  const Region& region = space.model().regions[patch];
  FieldSample out;
  out.point = s.point;
  out.A = s.value;
  out.B = s.curl;
  out.H = materials.nu(region.material) * s.curl - region_magnetization(region, s.point);
  std::tie(out.B_r, out.B_theta) = cylindrical_components(s.point, out.B);
  out.H_theta = cylindrical_components(s.point, out.H).second;
  return out;
}

double integrate(const EdgeSpace& space, const Eigen::VectorXd& coeffs,
                 const VolumeIntegrand& integrand, const std::vector<int>& patches, int points) {
  const FieldEvaluator ev(space, coeffs);
  const int q = default_points(space, points);
  const QuadratureRule rule({q, q, q});
  const auto& r = rule.rules;
  double total = 0;
  for (const auto& el : elements_of(space, patches)) {
    const auto& patch = space.model().patches[el.patch];
    const double vol = (el.hi[0] - el.lo[0]) * (el.hi[1] - el.lo[1]) * (el.hi[2] - el.lo[2]);
    for (int k = 0; k < r[2].size(); ++k)
      for (int j = 0; j < r[1].size(); ++j)
        for (int i = 0; i < r[0].size(); ++i) {
          const Vec3 xi(el.lo[0] + (el.hi[0] - el.lo[0]) * r[0].points[i],
                        el.lo[1] + (el.hi[1] - el.lo[1]) * r[1].points[j],
                        el.lo[2] + (el.hi[2] - el.lo[2]) * r[2].points[k]);
          const double det = jacobian(patch, xi, el.patch).determinant;
          total += r[0].weights[i] * r[1].weights[j] * r[2].weights[k] * vol * det *
                   integrand(el.patch, ev(el.patch, xi));
        }
  }
  return total;
}

}  // namespace isomortar
