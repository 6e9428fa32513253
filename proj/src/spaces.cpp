// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/spaces.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "isomortar/quadrature.hpp"

namespace isomortar {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

/// The two directions other than d, increasing.
std::array<int, 2> others(int d) {
  switch (d) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool same_knots(const KnotVector<>& a, const KnotVector<>& b, bool reversed) {
  if (a.degree() != b.degree() || a.knots().size() != b.knots().size()) return false;
  const auto& ka = a.knots();
  const auto& kb = b.knots();
  const std::size_t m = ka.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double other = reversed ? 1.0 - kb[m - 1 - i] : kb[i];
    if (std::abs(ka[i] - other) > kKnotTolerance) return false;
  }
  return true;
}

/// Degree-p values (row 0) and first derivatives (row 1) of N, and the
/// scaled reduced functions D with their derivative.
struct DirectionBasis {
  BasisDerivatives<double> node;
  BasisDerivatives<double> red;
};

DirectionBasis eval_direction(const KnotVector<>& kv, const KnotVector<>& red, double x) {
  DirectionBasis b;
  b.node = eval_basis_derivatives(kv, x, 1);
  b.red = eval_basis_derivatives(red, x, std::min(1, red.degree()));
  for (int j = 0; j < b.red.ders.cols(); ++j)
    b.red.ders.col(j) *= derivative_scale(red, b.red.first + j);
  return b;
}

double node_der(const DirectionBasis& b, int j) { return b.node.ders(1, j); }
double red_der(const DirectionBasis& b, int j) {
  return b.red.ders.rows() > 1 ? b.red.ders(1, j) : 0.0;
}

/// Applies the inverse of `m` along axis `axis` of a dims[0] x dims[1] x
/// dims[2] array stored first-index fastest.
void solve_along(Eigen::VectorXd& data, const std::array<int, 3>& dims, int axis,
                 const Eigen::MatrixXd& m) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const std::array<int, 3> stride = {1, dims[0], dims[0] * dims[1]};
  const auto o = others(axis);
  Eigen::VectorXd line(dims[axis]);
  for (int b = 0; b < dims[o[1]]; ++b)
    for (int a = 0; a < dims[o[0]]; ++a) {
      const int base = a * stride[o[0]] + b * stride[o[1]];
      for (int i = 0; i < dims[axis]; ++i) line[i] = data[base + i * stride[axis]];
      line = lu.solve(line);
      for (int i = 0; i < dims[axis]; ++i) data[base + i * stride[axis]] = line[i];
    }
}

Eigen::MatrixXd collocation_matrix(const KnotVector<>& kv) {
  const auto g = kv.greville();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kv.size(), kv.size());
  for (int i = 0; i < kv.size(); ++i) {
    const auto b = eval_basis(kv, g[i]);
    for (int j = 0; j < b.values.size(); ++j) c(i, b.first + j) = b.values[j];
  }
  return c;
}

/// Sub-intervals of [a, b] split at the breakpoints of kv.
std::vector<std::pair<double, double>> split_at_knots(const KnotVector<>& kv, double a, double b) {
  std::vector<std::pair<double, double>> out;
  double lo = a;
  for (double k : kv.breakpoints()) {
    if (k > lo && k < b) {
      out.emplace_back(lo, k);
      lo = k;
    }
  }
  if (b > lo) out.emplace_back(lo, b);
  return out;
}

Eigen::MatrixXd histopolation_matrix(const KnotVector<>& kv, const KnotVector<>& red) {
  const auto g = kv.greville();
  const int m = kv.size() - 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  const GaussRule rule = gauss_legendre(kv.degree() + 2);
  for (int i = 0; i < m; ++i)
    for (auto [a, b] : split_at_knots(kv, g[i], g[i + 1]))
      for (int q = 0; q < rule.size(); ++q) {
        const double x = a + (b - a) * rule.points[q];
        const auto v = eval_basis(red, x);
        for (int j = 0; j < v.values.size(); ++j)
          h(i, v.first + j) += rule.weights[q] * (b - a) * v.values[j] *
                               derivative_scale(red, v.first + j);
      }
  return h;
}

}  // namespace

std::array<int, 4> PatchEdgeSpace::edge_multi_index(int local) const {
  int d = 2;
  while (d > 0 && local < offset[d]) --d;
  const auto c = component_counts(d);
  const int r = local - offset[d];
  return {d, r % c[0], (r / c[0]) % c[1], r / (c[0] * c[1])};
}

void eval_reference_edge_basis(const PatchEdgeSpace& ps, const Vec3& xi, LocalEdgeBasis& out) {
  out.local.clear();
  out.value.clear();
  out.curl.clear();
  std::array<DirectionBasis, 3> b;
  for (int d = 0; d < 3; ++d) b[d] = eval_direction(ps.knots[d], ps.reduced[d], xi[d]);
  for (int d = 0; d < 3; ++d) {
    const auto [a, c] = others(d);
    const auto& bd = b[d];
    const auto& ba = b[a];
    const auto& bc = b[c];
    for (int kc = 0; kc < bc.node.ders.cols(); ++kc)
      for (int ka = 0; ka < ba.node.ders.cols(); ++ka)
        for (int e = 0; e < bd.red.ders.cols(); ++e) {
          const double fd = bd.red.ders(0, e), na = ba.node.ders(0, ka), nc = bc.node.ders(0, kc);
          std::array<int, 3> idx;
          idx[d] = bd.red.first + e;
          idx[a] = ba.node.first + ka;
          idx[c] = bc.node.first + kc;
          Vec3 grad;
          grad[d] = red_der(bd, e) * na * nc;
          grad[a] = fd * node_der(ba, ka) * nc;
          grad[c] = fd * na * node_der(bc, kc);
          Vec3 value = Vec3::Zero();
          value[d] = fd * na * nc;
          out.local.push_back(ps.edge_index(d, idx[0], idx[1], idx[2]));
          out.value.push_back(value);
          out.curl.push_back(grad.cross(Vec3::Unit(d)));
        }
  }
}

EdgeSpace build_edge_space(std::shared_ptr<const MultipatchModel> model, int degree) {
  if (degree < 1) throw DegreeError("edge space requires degree >= 1");
  EdgeSpace s;
  s.model_ = model;
  s.degree_ = degree;
  const int np = model->size();
  std::vector<int> vbase(np + 1, 0);
  for (int p = 0; p < np; ++p) {
    const auto& el = model->patches[p].elements();
    std::array<KnotVector<>, 3> kv = {KnotVector<>::uniform(degree, el[0]),
                                      KnotVector<>::uniform(degree, el[1]),
                                      KnotVector<>::uniform(degree, el[2])};
    std::array<KnotVector<>, 3> red = {reduced_knotvector(kv[0]), reduced_knotvector(kv[1]),
                                       reduced_knotvector(kv[2])};
    PatchEdgeSpace ps{kv, red, {}, {}, 0, {}, {}, {}};
    for (int d = 0; d < 3; ++d) ps.n[d] = kv[d].size();
    int off = 0;
    for (int d = 0; d < 3; ++d) {
      ps.offset[d] = off;
      const auto c = ps.component_counts(d);
      off += c[0] * c[1] * c[2];
    }
    ps.local_dofs = off;
    vbase[p + 1] = vbase[p] + ps.n[0] * ps.n[1] * ps.n[2];
    s.patches_.push_back(std::move(ps));
  }

  UnionFind uf(vbase[np]);
  for (const auto& g : model->interfaces) {
    const auto& pa = s.patches_[g.patch_a];
    const auto& pb = s.patches_[g.patch_b];
    const auto ta = face_tangents(g.face_a);
    const auto tb = face_tangents(g.face_b);
    const int ua = g.swap ? ta[1] : ta[0];
    const int va = g.swap ? ta[0] : ta[1];
    if (!same_knots(pa.knots[ua], pb.knots[tb[0]], g.flip_u) ||
        !same_knots(pa.knots[va], pb.knots[tb[1]], g.flip_v))
      throw TopologyError("non-conforming glue between patches " + std::to_string(g.patch_a) +
                          " and " + std::to_string(g.patch_b) +
                          ": knot vectors differ across the shared face");
    for (int iv = 0; iv < pa.n[ta[1]]; ++iv)
      for (int iu = 0; iu < pa.n[ta[0]]; ++iu) {
        std::array<int, 3> ia;
        ia[face_direction(g.face_a)] = face_side(g.face_a) ? pa.n[face_direction(g.face_a)] - 1 : 0;
        ia[ta[0]] = iu;
        ia[ta[1]] = iv;
        int u = iu, v = iv;
        if (g.swap) std::swap(u, v);
        if (g.flip_u) u = pb.n[tb[0]] - 1 - u;
        if (g.flip_v) v = pb.n[tb[1]] - 1 - v;
        std::array<int, 3> ib;
        ib[face_direction(g.face_b)] = face_side(g.face_b) ? pb.n[face_direction(g.face_b)] - 1 : 0;
        ib[tb[0]] = u;
        ib[tb[1]] = v;
        uf.unite(vbase[g.patch_a] + pa.vertex_index(ia[0], ia[1], ia[2]),
                 vbase[g.patch_b] + pb.vertex_index(ib[0], ib[1], ib[2]));
      }
  }

  std::vector<int> root_id(vbase[np], -1);
  int nv = 0;
  for (int p = 0; p < np; ++p) {
    auto& ps = s.patches_[p];
    ps.vertex.resize(vbase[p + 1] - vbase[p]);
    for (int l = 0; l < static_cast<int>(ps.vertex.size()); ++l) {
      const int r = uf.find(vbase[p] + l);
      if (root_id[r] < 0) root_id[r] = nv++;
      ps.vertex[l] = root_id[r];
    }
  }
  s.num_vertices_ = nv;

  std::map<std::pair<int, int>, int> edge_id;
  for (auto& ps : s.patches_) {
    ps.dof.resize(ps.local_dofs);
    ps.sign.resize(ps.local_dofs);
    for (int l = 0; l < ps.local_dofs; ++l) {
      const auto [d, i, j, k] = ps.edge_multi_index(l);
      std::array<int, 3> t = {i, j, k};
      ++t[d];
      const int gs = ps.vertex[ps.vertex_index(i, j, k)];
      const int gt = ps.vertex[ps.vertex_index(t[0], t[1], t[2])];
      if (gs == gt) throw TopologyError("degenerate control edge (both ends glued together)");
      const auto key = std::minmax(gs, gt);
      auto [it, inserted] = edge_id.try_emplace({key.first, key.second}, s.num_dofs());
      if (inserted) {
        s.edge_vertices_.push_back({key.first, key.second});
        s.edge_forward_.push_back({gs, gt});
        s.edge_direction_.push_back(d);
      }
      ps.dof[l] = it->second;
      ps.sign[l] = gs < gt ? 1 : -1;
    }
  }
  return s;
}

SparseMatrix gradient_matrix(const EdgeSpace& space) {
  std::vector<Eigen::Triplet<double>> t;
  for (int e = 0; e < space.num_dofs(); ++e) {
    t.emplace_back(e, space.edge_vertices(e)[0], -1.0);
    t.emplace_back(e, space.edge_vertices(e)[1], 1.0);
  }
  SparseMatrix g(space.num_dofs(), space.num_vertices());
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

Eigen::VectorXd interpolate_scalar(const EdgeSpace& space, const ScalarField& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_vertices());
  for (int p = 0; p < space.num_patches(); ++p) {
    const auto& ps = space.patch(p);
    const auto& patch = space.model().patches[p];
    std::array<std::vector<double>, 3> g;
    for (int d = 0; d < 3; ++d) g[d] = ps.knots[d].greville();
    Eigen::VectorXd data(ps.n[0] * ps.n[1] * ps.n[2]);
    for (int k = 0; k < ps.n[2]; ++k)
      for (int j = 0; j < ps.n[1]; ++j)
        for (int i = 0; i < ps.n[0]; ++i)
          data[ps.vertex_index(i, j, k)] = f(patch.evaluate(Vec3(g[0][i], g[1][j], g[2][k])));
    for (int d = 0; d < 3; ++d) solve_along(data, ps.n, d, collocation_matrix(ps.knots[d]));
    for (int l = 0; l < data.size(); ++l) out[ps.vertex[l]] = data[l];
  }
  return out;
}

Eigen::VectorXd interpolate_field(const EdgeSpace& space, const VectorField& a) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  const GaussRule rule = gauss_legendre(space.degree() + 6);
  for (int p = 0; p < space.num_patches(); ++p) {
    const auto& ps = space.patch(p);
    const auto& patch = space.model().patches[p];
    std::array<std::vector<double>, 3> g;
    for (int d = 0; d < 3; ++d) g[d] = ps.knots[d].greville();
    for (int d = 0; d < 3; ++d) {
      const auto c = ps.component_counts(d);
      const auto [oa, ob] = others(d);
      Eigen::VectorXd data(c[0] * c[1] * c[2]);
      for (int k = 0; k < c[2]; ++k)
        for (int j = 0; j < c[1]; ++j)
          for (int i = 0; i < c[0]; ++i) {
            const std::array<int, 3> idx = {i, j, k};
            double integral = 0;
            for (auto [lo, hi] : split_at_knots(ps.knots[d], g[d][idx[d]], g[d][idx[d] + 1]))
              for (int q = 0; q < rule.size(); ++q) {
                Vec3 xi;
                xi[d] = lo + (hi - lo) * rule.points[q];
                xi[oa] = g[oa][idx[oa]];
                xi[ob] = g[ob][idx[ob]];
                const auto [x, jac] = patch.evaluate_with_derivatives(xi);
                integral += rule.weights[q] * (hi - lo) * a(x).dot(jac.col(d));
              }
            data[i + c[0] * (j + c[1] * k)] = integral;
          }
      solve_along(data, c, d, histopolation_matrix(ps.knots[d], ps.reduced[d]));
      solve_along(data, c, oa, collocation_matrix(ps.knots[oa]));
      solve_along(data, c, ob, collocation_matrix(ps.knots[ob]));
      for (int l = 0; l < data.size(); ++l) {
        const int local = ps.offset[d] + l;
        out[ps.dof[local]] = ps.sign[local] * data[l];
      }
    }
  }
  return out;
}

double evaluate_scalar(const EdgeSpace& space, const Eigen::VectorXd& coeffs, int patch,
                       const Vec3& xi) {
  const auto& ps = space.patch(patch);
  std::array<BasisValues<double>, 3> b;
  for (int d = 0; d < 3; ++d) b[d] = eval_basis(ps.knots[d], xi[d]);
  double v = 0;
  for (int k = 0; k < b[2].values.size(); ++k)
    for (int j = 0; j < b[1].values.size(); ++j)
      for (int i = 0; i < b[0].values.size(); ++i)
        v += b[0].values[i] * b[1].values[j] * b[2].values[k] *
             coeffs[ps.vertex[ps.vertex_index(b[0].first + i, b[1].first + j, b[2].first + k)]];
  return v;
}

FieldEvaluator::FieldEvaluator(const EdgeSpace& space, const Eigen::VectorXd& coeffs)
    : space_(&space), coeffs_(&coeffs) {
  if (coeffs.size() != space.num_dofs())
    throw DomainError("field evaluator: coefficient vector has wrong length");
}

FieldEvaluator::Sample FieldEvaluator::operator()(int patch, const Vec3& xi) const {
  if (patch < 0 || patch >= space_->num_patches())
    throw DomainError("field evaluator: unknown patch " + std::to_string(patch));
  for (int d = 0; d < 3; ++d)
    if (!(xi[d] >= -1e-13 && xi[d] <= 1 + 1e-13))
      throw DomainError("field evaluator: reference point outside the patch");
  const auto& ps = space_->patch(patch);
  thread_local LocalEdgeBasis basis;
  eval_reference_edge_basis(ps, xi, basis);
  const JacobianInfo jac = jacobian(space_->model().patches[patch], xi, patch);
  Vec3 rv = Vec3::Zero(), rc = Vec3::Zero();
  for (std::size_t m = 0; m < basis.local.size(); ++m) {
    const double c = ps.sign[basis.local[m]] * (*coeffs_)[ps.dof[basis.local[m]]];
    rv += c * basis.value[m];
    rc += c * basis.curl[m];
  }
  const auto pf = push_forward_curl_conforming(jac, rv, rc);
  return {jac.point, pf.value, pf.curl};
}

DofConstraints apply_essential_bc(const EdgeSpace& space, const std::vector<std::string>& tags) {
  const auto& model = space.model();
  std::set<std::string> known;
  for (const auto& t : model.boundary_tags)
    for (const auto& s : t)
      if (!s.empty()) known.insert(s);
  for (const auto& t : tags)
    if (!known.count(t)) throw ConfigError("essential boundary condition: unknown tag '" + t + "'");
  const std::set<std::string> wanted(tags.begin(), tags.end());

  DofConstraints c;
  c.constrained.assign(space.num_dofs(), 0);
  c.dirichlet_vertex.assign(space.num_vertices(), 0);
  for (int p = 0; p < space.num_patches(); ++p) {
    const auto& ps = space.patch(p);
    for (int f = 0; f < 6; ++f) {
      if (!wanted.count(model.boundary_tags[p][f])) continue;
      const int d = face_direction(f);
      const int fixed = face_side(f) ? ps.n[d] - 1 : 0;
      for (int k = 0; k < ps.n[2]; ++k)
        for (int j = 0; j < ps.n[1]; ++j)
          for (int i = 0; i < ps.n[0]; ++i) {
            const std::array<int, 3> idx = {i, j, k};
            if (idx[d] == fixed) c.dirichlet_vertex[ps.vertex[ps.vertex_index(i, j, k)]] = 1;
          }
      for (int l = 0; l < ps.local_dofs; ++l) {
        const auto mi = ps.edge_multi_index(l);
        if (mi[0] != d && mi[1 + d] == fixed) c.constrained[ps.dof[l]] = 1;
      }
    }
  }
  c.free_index.assign(space.num_dofs(), -1);
  for (int e = 0; e < space.num_dofs(); ++e)
    if (!c.constrained[e]) {
      c.free_index[e] = c.num_free();
      c.free_dofs.push_back(e);
    }
  return c;
}

void project_to_free(const DofConstraints& c, Eigen::VectorXd& coeffs) {
  for (int e = 0; e < static_cast<int>(c.constrained.size()); ++e)
    if (c.constrained[e]) coeffs[e] = 0;
}

// --------------------------------------------------------------- traces

Arc interface_arc(const Patch& patch, int face) {
  if (face_direction(face) != 0)
    throw GeometryError("interface face must be a radial (xi1) face of an annular patch");
  const auto& b = patch.basis();
  if (b.count(1) != 3 || b.direction(1).degree() != 2)
    throw GeometryError("interface patch is not a single rational quadratic arc in xi2");
  const int i = face_side(face) ? b.count(0) - 1 : 0;
  std::array<Vec2, 3> cp;
  std::array<double, 3> w;
  for (int j = 0; j < 3; ++j) {
    const int f = b.flat(i, j, 0);
    cp[j] = patch.control_points()[f].head<2>();
    w[j] = patch.weights()[f];
  }
  const double radius = cp[0].norm();
  double t0 = std::atan2(cp[0].y(), cp[0].x());
  t0 -= kTwoPi * std::floor(t0 / kTwoPi);
  if (t0 >= kTwoPi - 1e-12 * kTwoPi) t0 = 0;
  const double rel = std::atan2(cp[0].x() * cp[2].y() - cp[0].y() * cp[2].x(), cp[0].dot(cp[2]));
  Arc arc = make_arc(Vec2::Zero(), radius, t0, t0 + rel);
  for (int j = 0; j < 3; ++j)
    if ((arc.control_points[j] - cp[j]).norm() > 1e-12 * radius ||
        std::abs(arc.weights[j] / arc.weights[0] - w[j] / w[0]) > 1e-12)
      throw GeometryError("interface face is not an exact circular arc about the axis");
  return arc;
}

TraceSpace build_trace_space(const MultipatchModel& stator, const std::string& tag, int p, int q) {
  if (q < 1 || p - q <= 0 || (p - q) % 2 == 0)
    throw StabilityError("multiplier degree q = " + std::to_string(q) +
                         " is not p minus an odd number (p = " + std::to_string(p) + ")");
  TraceSpace t;
  t.degree_ = q;
  bool first = true;
  int z_elements = 0;
  for (int pi = 0; pi < stator.size(); ++pi)
    for (int f = 0; f < 6; ++f) {
      if (stator.boundary_tags[pi][f] != tag) continue;
      const auto& patch = stator.patches[pi];
      TraceArc ta;
      ta.patch = pi;
      ta.face = f;
      ta.arc = interface_arc(patch, f);
      ta.theta_knots = KnotVector<>::uniform(q, patch.elements()[1]);
      const double za = patch.evaluate(face_point(f, 0, 0)).z();
      const double zb = patch.evaluate(face_point(f, 0, 1)).z();
      if (first) {
        t.radius_ = ta.arc.radius;
        t.z0_ = za;
        t.length_ = zb - za;
        z_elements = patch.elements()[2];
        first = false;
      } else if (std::abs(ta.arc.radius - t.radius_) > 1e-12 * t.radius_ ||
                 std::abs(za - t.z0_) > 1e-12 * t.length_ ||
                 std::abs(zb - za - t.length_) > 1e-12 * t.length_ ||
                 patch.elements()[2] != z_elements) {
        throw GeometryError("interface patches disagree on radius, axial extent or z mesh");
      }
      t.arcs_.push_back(std::move(ta));
    }
  if (t.arcs_.empty()) throw GeometryError("no faces tagged '" + tag + "' for the trace space");
  std::sort(t.arcs_.begin(), t.arcs_.end(),
            [](const TraceArc& a, const TraceArc& b) { return a.arc.theta0 < b.arc.theta0; });
  double covered = 0;
  for (std::size_t a = 0; a < t.arcs_.size(); ++a) {
    const auto& cur = t.arcs_[a].arc;
    const double next0 = a + 1 < t.arcs_.size() ? t.arcs_[a + 1].arc.theta0 : t.arcs_[0].arc.theta0 + kTwoPi;
    if (std::abs(cur.theta1 - next0) > 1e-12 * kTwoPi)
      throw GeometryError("interface arcs leave a gap or overlap near angle " +
                          std::to_string(cur.theta1));
    covered += cur.theta1 - cur.theta0;
  }
  if (std::abs(covered - kTwoPi) > 1e-12 * kTwoPi)
    throw GeometryError("interface arcs do not cover the full circle");
  t.z_knots_ = KnotVector<>::uniform(q, z_elements);
  int offset = 0;
  for (auto& a : t.arcs_) {
    a.first_vertex = offset;
    offset += a.theta_knots.size() - 1;
  }
  t.n_theta_ = offset;
  return t;
}

void TraceSpace::evaluate(int arc, double xi_theta, double xi_z,
                          std::vector<TraceBasisValue>& out) const {
  out.clear();
  const auto& ta = arcs_[arc];
  const KnotVector<> red_t = reduced_knotvector(ta.theta_knots);
  const KnotVector<> red_z = reduced_knotvector(z_knots_);
  const auto nt = eval_basis(ta.theta_knots, xi_theta);
  const auto dt = eval_basis(red_t, xi_theta);
  const auto nz = eval_basis(z_knots_, xi_z);
  const auto dz = eval_basis(red_z, xi_z);
  const Vec2 x = ta.arc.evaluate(xi_theta) - ta.arc.center;
  const Vec2 dx = ta.arc.derivative(xi_theta);
  const double dtheta = (x.x() * dx.y() - x.y() * dx.x()) / x.squaredNorm();
  const double theta_metric = radius_ * dtheta;
  for (int k = 0; k < nz.values.size(); ++k)
    for (int e = 0; e < dt.values.size(); ++e) {
      const double w = dt.values[e] * derivative_scale(red_t, dt.first + e) * nz.values[k];
      // mu = w x e_r: mu_z = -w_theta
      out.push_back({theta_edge(ta.first_vertex + dt.first + e, nz.first + k), 0.0,
                     -w / theta_metric});
    }
  for (int e = 0; e < dz.values.size(); ++e)
    for (int j = 0; j < nt.values.size(); ++j) {
      const double w = nt.values[j] * dz.values[e] * derivative_scale(red_z, dz.first + e);
      const int jj = (ta.first_vertex + nt.first + j) % n_theta_;
      // mu_theta = w_z
      out.push_back({z_edge(jj, dz.first + e), w / length_, 0.0});
    }
}

}  // namespace isomortar
