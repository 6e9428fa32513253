// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "isomortar/quadrature.hpp"

namespace isomortar {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Vec3& xi) {
  std::ostringstream os;
  os << "(" << xi[0] << ", " << xi[1] << ", " << xi[2] << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- arcs

Arc make_arc(const Vec2& center, double radius, double theta0, double theta1) {
  const double span = theta1 - theta0;
  if (!(span > 0) || span >= kPi)
    throw GeometryError("make_arc: arc must span (0, pi); split it first");
  if (!(radius > 0)) throw GeometryError("make_arc: radius must be positive");
  Arc a;
  a.center = center;
  a.radius = radius;
  a.theta0 = theta0;
  a.theta1 = theta1;
  const double half = 0.5 * span;
  const double mid = theta0 + half;
  a.control_points[0] = center + radius * Vec2(std::cos(theta0), std::sin(theta0));
  a.control_points[1] = center + radius / std::cos(half) * Vec2(std::cos(mid), std::sin(mid));
  a.control_points[2] = center + radius * Vec2(std::cos(theta1), std::sin(theta1));
  a.weights = {1.0, std::cos(half), 1.0};
  return a;
}

Vec2 Arc::evaluate(double xi) const {
  const double b[3] = {(1 - xi) * (1 - xi), 2 * xi * (1 - xi), xi * xi};
  Vec2 num = Vec2::Zero();
  double den = 0;
  for (int i = 0; i < 3; ++i) {
    num += b[i] * weights[i] * control_points[i];
    den += b[i] * weights[i];
  }
  return num / den;
}

Vec2 Arc::derivative(double xi) const {
  const double b[3] = {(1 - xi) * (1 - xi), 2 * xi * (1 - xi), xi * xi};
  const double db[3] = {-2 * (1 - xi), 2 - 4 * xi, 2 * xi};
  Vec2 num = Vec2::Zero(), dnum = Vec2::Zero();
  double den = 0, dden = 0;
  for (int i = 0; i < 3; ++i) {
    num += b[i] * weights[i] * control_points[i];
    dnum += db[i] * weights[i] * control_points[i];
    den += b[i] * weights[i];
    dden += db[i] * weights[i];
  }
  return (dnum * den - num * dden) / (den * den);
}

double angle_of_parameter(const Arc& arc, double xi) {
  if (!(xi >= -1e-13 && xi <= 1 + 1e-13))
    throw DomainError("angle_of_parameter: parameter outside [0,1]");
  xi = std::clamp(xi, 0.0, 1.0);
  if (xi == 0.0) return arc.theta0;
  if (xi == 1.0) return arc.theta1;
  const Vec2 s = arc.control_points[0] - arc.center;
  const Vec2 p = arc.evaluate(xi) - arc.center;
  const double rel = std::atan2(s.x() * p.y() - s.y() * p.x(), s.dot(p));
  return arc.theta0 + rel;
}

double parameter_of_angle(const Arc& arc, double theta) {
  const double span = arc.theta1 - arc.theta0;
  const double slack = 1e-12 * 2 * kPi;
  if (theta < arc.theta0 - slack || theta > arc.theta1 + slack)
    throw DomainError("parameter_of_angle: angle " + std::to_string(theta) +
                      " outside arc range [" + std::to_string(arc.theta0) + ", " +
                      std::to_string(arc.theta1) + "]");
  if (theta <= arc.theta0) return 0.0;
  if (theta >= arc.theta1) return 1.0;
  double lo = 0, hi = 1;
  double xi = (theta - arc.theta0) / span;
  for (int it = 0; it < 100; ++it) {
    const double f = angle_of_parameter(arc, xi) - theta;
    if (std::abs(f) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(theta)) return xi;
    if (f > 0)
      hi = xi;
    else
      lo = xi;
    const Vec2 p = arc.evaluate(xi) - arc.center;
    const Vec2 d = arc.derivative(xi);
    const double dtheta = (p.x() * d.y() - p.y() * d.x()) / p.squaredNorm();
    double next = xi - f / dtheta;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - xi) < 1e-15) return next;
    xi = next;
  }
  return xi;
}

// --------------------------------------------------------------- patches

Patch::Patch(std::array<KnotVector<>, 3> knots, std::vector<Vec3> control_points,
             std::vector<double> weights, std::array<int, 3> elements)
    : basis_(std::move(knots)),
      control_points_(std::move(control_points)),
      weights_(std::move(weights)),
      elements_(elements) {
  if (static_cast<int>(control_points_.size()) != basis_.dimension() ||
      static_cast<int>(weights_.size()) != basis_.dimension())
    throw GeometryError("patch: control lattice does not match basis counts");
  for (double w : weights_)
    if (!(w > 0)) throw GeometryError("patch: weights must be positive");
  for (int e : elements_)
    if (e < 1) throw GeometryError("patch: element counts must be positive");
}

std::pair<Vec3, Mat3> Patch::evaluate_with_derivatives(const Vec3& xi) const {
  std::array<BasisDerivatives<double>, 3> b;
  for (int d = 0; d < 3; ++d)
    b[d] = eval_basis_derivatives(basis_.direction(d), xi[d],
                                  std::min(1, basis_.direction(d).degree()));
  Vec3 num = Vec3::Zero();
  Mat3 dnum = Mat3::Zero();
  double den = 0;
  Vec3 dden = Vec3::Zero();
  auto der = [&](int d, int j) {
    return b[d].ders.rows() > 1 ? b[d].ders(1, j) : 0.0;
  };
  for (int k = 0; k < b[2].ders.cols(); ++k)
    for (int j = 0; j < b[1].ders.cols(); ++j)
      for (int i = 0; i < b[0].ders.cols(); ++i) {
        const int f = basis_.flat(b[0].first + i, b[1].first + j, b[2].first + k);
        const double w = weights_[f];
        const double n0 = b[0].ders(0, i), n1 = b[1].ders(0, j), n2 = b[2].ders(0, k);
        const double v = n0 * n1 * n2 * w;
        const Vec3 g(der(0, i) * n1 * n2 * w, n0 * der(1, j) * n2 * w, n0 * n1 * der(2, k) * w);
        num += v * control_points_[f];
        den += v;
        dnum += control_points_[f] * g.transpose();
        dden += g;
      }
  const Vec3 x = num / den;
  const Mat3 dx = (dnum - x * dden.transpose()) / den;
  return {x, dx};
}

Vec3 Patch::evaluate(const Vec3& xi) const { return evaluate_with_derivatives(xi).first; }

Patch Patch::rotated(double angle) const {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  std::vector<Vec3> cps(control_points_.size());
  for (std::size_t i = 0; i < cps.size(); ++i) cps[i] = r * control_points_[i];
  return Patch({basis_.direction(0), basis_.direction(1), basis_.direction(2)}, std::move(cps),
               weights_, elements_);
}

JacobianInfo jacobian(const Patch& patch, const Vec3& xi, int patch_id) {
  auto [x, dx] = patch.evaluate_with_derivatives(xi);
  JacobianInfo info;
  info.point = x;
  info.matrix = dx;
  info.determinant = dx.determinant();
  if (!(info.determinant > 0) || !std::isfinite(info.determinant))
    throw GeometryError("singular or inverted Jacobian (det = " +
                        std::to_string(info.determinant) + ") in patch " +
                        std::to_string(patch_id) + " at xi = " + describe(xi));
  info.inverse_transpose = dx.inverse().transpose();
  return info;
}

Patch make_box_patch(const Vec3& origin, const Vec3& size, std::array<int, 3> elements) {
  const KnotVector<> lin({0, 0, 1, 1}, 1);
  std::vector<Vec3> cps;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        cps.push_back(origin + Vec3(i * size[0], j * size[1], k * size[2]));
  return Patch({lin, lin, lin}, std::move(cps), std::vector<double>(8, 1.0), elements);
}

Patch make_sector_patch(double r0, double r1, double theta0, double theta1, double z0,
                        double length, std::array<int, 3> elements) {
  if (!(r1 > r0 && r0 > 0)) throw GeometryError("sector patch: need 0 < r0 < r1");
  const Arc unit = make_arc(Vec2::Zero(), 1.0, theta0, theta1);
  const KnotVector<> lin({0, 0, 1, 1}, 1);
  const KnotVector<> quad({0, 0, 0, 1, 1, 1}, 2);
  std::vector<Vec3> cps;
  std::vector<double> w;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 2; ++i) {
        const double r = i == 0 ? r0 : r1;
        const Vec2 q = r * unit.control_points[j];
        cps.emplace_back(q.x(), q.y(), z0 + k * length);
        w.push_back(unit.weights[j]);
      }
  return Patch({lin, quad, lin}, std::move(cps), std::move(w), elements);
}

std::array<int, 2> face_tangents(int face) {
  switch (face_direction(face)) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

Vec3 face_point(int face, double u, double v) {
  Vec3 xi;
  const auto t = face_tangents(face);
  xi[face_direction(face)] = face_side(face);
  xi[t[0]] = u;
  xi[t[1]] = v;
  return xi;
}

// ----------------------------------------------------------- multipatch

namespace {

double model_extent(const MultipatchModel& m) {
  double e = 0;
  for (const auto& p : m.patches)
    for (const auto& c : p.control_points()) e = std::max(e, c.cwiseAbs().maxCoeff());
  return std::max(1.0, e);
}

Vec2 map_face_coords(const PatchInterface& g, double u, double v) {
  double a = u, b = v;
  if (g.swap) std::swap(a, b);
  if (g.flip_u) a = 1 - a;
  if (g.flip_v) b = 1 - b;
  return {a, b};
}

double face_mismatch(const MultipatchModel& m, const PatchInterface& g, int samples) {
  double worst = 0;
  for (int iu = 0; iu < samples; ++iu)
    for (int iv = 0; iv < samples; ++iv) {
      const double u = double(iu) / (samples - 1), v = double(iv) / (samples - 1);
      const Vec2 uv = map_face_coords(g, u, v);
      const Vec3 xa = m.patches[g.patch_a].evaluate(face_point(g.face_a, u, v));
      const Vec3 xb = m.patches[g.patch_b].evaluate(face_point(g.face_b, uv[0], uv[1]));
      worst = std::max(worst, (xa - xb).norm());
    }
  return worst;
}

}  // namespace

void glue(MultipatchModel& model) {
  model.interfaces.clear();
  const double tol = 1e-12 * model_extent(model);
  const int np = model.size();
  std::vector<std::array<Vec3, 6>> centers(np);
  for (int p = 0; p < np; ++p)
    for (int f = 0; f < 6; ++f) centers[p][f] = model.patches[p].evaluate(face_point(f, 0.5, 0.5));
  for (int a = 0; a < np; ++a)
    for (int fa = 0; fa < 6; ++fa)
      for (int b = a + 1; b < np; ++b)
        for (int fb = 0; fb < 6; ++fb) {
          if ((centers[a][fa] - centers[b][fb]).norm() > tol) continue;
          for (int o = 0; o < 8; ++o) {
            PatchInterface g{a, fa, b, fb, bool(o & 4), bool(o & 1), bool(o & 2)};
            if (face_mismatch(model, g, 5) <= tol) {
              model.interfaces.push_back(g);
              break;
            }
          }
        }
}

void validate(const MultipatchModel& model) {
  const int np = model.size();
  if (static_cast<int>(model.regions.size()) != np ||
      static_cast<int>(model.boundary_tags.size()) != np)
    throw GeometryError("model: per-patch regions/tags missing");
  const double tol = 1e-12 * model_extent(model);
  std::vector<std::array<int, 6>> glued(np);
  for (auto& g : glued) g.fill(0);
  for (const auto& g : model.interfaces) {
    if (face_mismatch(model, g, 5) > tol)
      throw GeometryError("model: glued faces of patches " + std::to_string(g.patch_a) + " and " +
                          std::to_string(g.patch_b) + " are not coincident");
    ++glued[g.patch_a][g.face_a];
    ++glued[g.patch_b][g.face_b];
  }
  for (int p = 0; p < np; ++p)
    for (int f = 0; f < 6; ++f) {
      const bool tagged = !model.boundary_tags[p][f].empty();
      if (glued[p][f] > 1)
        throw TopologyError("model: face " + std::to_string(f) + " of patch " +
                            std::to_string(p) + " glued more than once");
      if (tagged == (glued[p][f] == 1))
        throw TopologyError("model: face " + std::to_string(f) + " of patch " + std::to_string(p) +
                            (tagged ? " is both glued and tagged" : " is exterior but untagged"));
    }
  for (int p = 0; p < np; ++p)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) jacobian(model.patches[p], Vec3(i, j, k) * 0.5, p);
}

MultipatchModel rotated(const MultipatchModel& model, double angle) {
  MultipatchModel out = model;
  for (auto& p : out.patches) p = p.rotated(angle);
  return out;
}

double volume(const MultipatchModel& model, int points_per_direction) {
  const GaussRule g = gauss_legendre(points_per_direction);
  double total = 0;
  for (int p = 0; p < model.size(); ++p) {
    const auto& patch = model.patches[p];
    const auto& ne = patch.elements();
    for (int ek = 0; ek < ne[2]; ++ek)
      for (int ej = 0; ej < ne[1]; ++ej)
        for (int ei = 0; ei < ne[0]; ++ei)
          for (int c = 0; c < g.size(); ++c)
            for (int b = 0; b < g.size(); ++b)
              for (int a = 0; a < g.size(); ++a) {
                const Vec3 xi((ei + g.points[a]) / ne[0], (ej + g.points[b]) / ne[1],
                              (ek + g.points[c]) / ne[2]);
                const double w = g.weights[a] * g.weights[b] * g.weights[c] /
                                 (double(ne[0]) * ne[1] * ne[2]);
                total += w * jacobian(patch, xi, p).determinant;
              }
  }
  return total;
}

MultipatchModel build_annulus(const std::vector<RingSpec>& rings,
                              const std::vector<SectorSpec>& sectors, double length,
                              int axial_elements, const std::string& inner_tag,
                              const std::string& outer_tag) {
  if (rings.empty() || sectors.empty()) throw GeometryError("annulus: no rings or sectors");
  // split wide sectors into sub-arcs of at most pi/2
  std::vector<SectorSpec> arcs;
  for (const auto& s : sectors) {
    const double span = s.theta1 - s.theta0;
    if (!(span > 0)) throw GeometryError("annulus: sector with non-positive span");
    const int pieces = std::max(1, int(std::ceil(span / (0.5 * kPi) - 1e-12)));
    for (int k = 0; k < pieces; ++k) {
      SectorSpec sub = s;
      sub.theta0 = s.theta0 + span * k / pieces;
      sub.theta1 = k + 1 == pieces ? s.theta1 : s.theta0 + span * (k + 1) / pieces;
      sub.angular_elements = std::max(1, (s.angular_elements + pieces - 1) / pieces);
      arcs.push_back(sub);
    }
  }
  MultipatchModel m;
  m.annular = true;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const auto& ring = rings[r];
    for (const auto& s : arcs) {
      m.patches.push_back(make_sector_patch(ring.r_inner, ring.r_outer, s.theta0, s.theta1, 0.0,
                                            length,
                                            {ring.radial_elements, s.angular_elements,
                                             axial_elements}));
      Region reg;
      reg.material = ring.material;
      reg.radial_magnetization = ring.magnetization * s.magnet_sign;
      reg.axial_current_density = ring.carries_current ? s.current_density : 0.0;
      m.regions.push_back(reg);
      std::array<std::string, 6> tags;
      if (r == 0) tags[0] = inner_tag;
      if (r + 1 == rings.size()) tags[1] = outer_tag;
      tags[4] = "zmin";
      tags[5] = "zmax";
      m.boundary_tags.push_back(tags);
    }
  }
  glue(m);
  validate(m);
  return m;
}

// --------------------------------------------------------------- machine

void MachineConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("machine." + field + ": " + why);
  };
  if (!(shaft_radius > 0)) fail("shaft_radius", "must be positive");
  if (!(magnet_thickness > 0)) fail("magnet_thickness", "must be positive");
  if (!(rotor_outer_radius - magnet_thickness > shaft_radius))
    fail("rotor_outer_radius", "rotor iron ring (shaft .. magnet) must have positive thickness");
  if (!(interface_radius > rotor_outer_radius))
    fail("interface_radius", "must exceed rotor_outer_radius (rotor air-gap piece)");
  if (!(stator_inner_radius > interface_radius))
    fail("stator_inner_radius", "must exceed interface_radius (stator air-gap piece)");
  if (!(winding_thickness > 0)) fail("winding_thickness", "must be positive");
  if (!(stator_outer_radius > stator_inner_radius + winding_thickness))
    fail("stator_outer_radius", "stator yoke must have positive thickness");
  if (!(axial_length > 0)) fail("axial_length", "must be positive");
  if (pole_pairs < 1) fail("pole_pairs", "must be >= 1");
  if (!(magnet_arc_fraction > 0 && magnet_arc_fraction <= 1))
    fail("magnet_arc_fraction", "must lie in (0, 1]");
  if (!(iron_relative_permeability > 0)) fail("iron_relative_permeability", "must be positive");
  if (degree < 2) fail("degree", "must be >= 2");
  if (multiplier_degree < 1) fail("multiplier_degree", "must be >= 1");
  if ((degree - multiplier_degree) <= 0 || (degree - multiplier_degree) % 2 == 0)
    fail("multiplier_degree", "degree - multiplier_degree must be a positive odd number");
  if (radial_elements < 1) fail("radial_elements", "must be >= 1");
  if (rotor_elements_per_pole < 2 && magnet_arc_fraction < 1)
    fail("rotor_elements_per_pole", "must be >= 2 when magnets do not fill the pole");
  if (rotor_elements_per_pole < 1) fail("rotor_elements_per_pole", "must be >= 1");
  if (stator_elements_per_belt < 1) fail("stator_elements_per_belt", "must be >= 1");
  if (axial_elements < 1) fail("axial_elements", "must be >= 1");
  if (refinement < 0 || refinement > 6) fail("refinement", "must lie in [0, 6]");
}

double belt_current_factor(int belt, double phase) {
  const double ia = std::cos(phase);
  const double ib = std::cos(phase - 2 * kPi / 3);
  const double ic = std::cos(phase + 2 * kPi / 3);
  switch (belt % 6) {
    case 0: return ia;
    case 1: return -ic;
    case 2: return ib;
    case 3: return -ia;
    case 4: return ic;
    default: return -ib;
  }
}

MachineModel build_machine(const MachineConfig& cfg) {
  cfg.validate();
  const int scale = 1 << cfg.refinement;
  const int nr = cfg.radial_elements * scale;
  const int poles = 2 * cfg.pole_pairs;
  const double pitch = kPi / cfg.pole_pairs;

  std::vector<SectorSpec> rotor_sectors;
  const int per_pole = cfg.rotor_elements_per_pole * scale;
  const double half = 0.5 * cfg.magnet_arc_fraction * pitch;
  if (cfg.magnet_arc_fraction >= 1) {
    for (int k = 0; k < poles; ++k)
      rotor_sectors.push_back({k * pitch - half, k * pitch + half, per_pole, k % 2 ? -1.0 : 1.0, 0});
  } else {
    const int em = std::clamp(int(std::lround(cfg.magnet_arc_fraction * per_pole)), 1, per_pole - 1);
    for (int k = 0; k < poles; ++k) {
      const double c = k * pitch;
      rotor_sectors.push_back({c - half, c + half, em, k % 2 ? -1.0 : 1.0, 0});
      rotor_sectors.push_back({c + half, c + pitch - half, per_pole - em, 0, 0});
    }
  }
  const double r_mag = cfg.rotor_outer_radius - cfg.magnet_thickness;
  std::vector<RingSpec> rotor_rings = {
      {cfg.shaft_radius, r_mag, nr, "rotor_iron", 0, false},
      {r_mag, cfg.rotor_outer_radius, nr, "magnet", cfg.magnetization(), false},
      {cfg.rotor_outer_radius, cfg.interface_radius, nr, "airgap", 0, false}};

  std::vector<SectorSpec> stator_sectors;
  const int belts = 6 * cfg.pole_pairs;
  const double belt = 2 * kPi / belts;
  for (int k = 0; k < belts; ++k)
    stator_sectors.push_back({k * belt, (k + 1) * belt, cfg.stator_elements_per_belt * scale, 0,
                              cfg.current_density * belt_current_factor(k, cfg.current_phase)});
  const double r_w = cfg.stator_inner_radius + cfg.winding_thickness;
  std::vector<RingSpec> stator_rings = {
      {cfg.interface_radius, cfg.stator_inner_radius, nr, "airgap", 0, false},
      {cfg.stator_inner_radius, r_w, nr, "winding", 0, true},
      {r_w, cfg.stator_outer_radius, nr, "stator_iron", 0, false}};

  MachineModel mm;
  mm.rotor = build_annulus(rotor_rings, rotor_sectors, cfg.axial_length, cfg.axial_elements,
                           "shaft", "interface");
  mm.stator = build_annulus(stator_rings, stator_sectors, cfg.axial_length, cfg.axial_elements,
                            "interface", "outer");
  return mm;
}

}  // namespace isomortar
