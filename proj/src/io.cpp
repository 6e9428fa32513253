// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/io.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace isomortar {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

void write_torque_csv(std::ostream& out, const std::vector<TorqueResult>& rows, bool record_timing) {
  out << "alpha_rad,T_surface_rotor,T_surface_stator,T_lagrange_rotor,T_lagrange_stator,"
         "T_arkkio_rotor,T_arkkio_stator,solve_residual,wall_time_s\n";
  for (const auto& r : rows) {
    out << fmt(r.alpha) << ',' << opt(r.surface_rotor) << ',' << opt(r.surface_stator) << ','
        << opt(r.lagrange_rotor) << ',' << opt(r.lagrange_stator) << ',' << opt(r.arkkio_rotor)
        << ',' << opt(r.arkkio_stator) << ',' << (r.ok ? fmt(r.residual) : std::string()) << ','
        << (record_timing ? fmt(r.wall_time) : std::string()) << '\n';
  }
}

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      out << r << ' ' << it.col() << ' ' << fmt(it.value()) << '\n';
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << v.size() << '\n';
  for (int i = 0; i < v.size(); ++i) out << fmt(v[i]) << '\n';
}

void write_geometry_vtk(std::ostream& out, const MultipatchModel& model, int n) {
  std::vector<Vec3> pts;
  std::vector<std::array<int, 4>> quads;
  std::vector<int> patch_of;
  for (int p = 0; p < model.size(); ++p)
    for (int f = 0; f < 6; ++f) {
      if (model.boundary_tags[p][f].empty()) continue;
      const int base = static_cast<int>(pts.size());
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          pts.push_back(model.patches[p].evaluate(face_point(f, double(i) / n, double(j) / n)));
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const int a = base + i + (n + 1) * j;
          quads.push_back({a, a + 1, a + n + 2, a + n + 1});
          patch_of.push_back(p);
        }
    }
  out << "# vtk DataFile Version 3.0\nmultipatch boundary\nASCII\nDATASET POLYDATA\nPOINTS "
      << pts.size() << " double\n";
  for (const auto& x : pts) out << fmt(x.x()) << ' ' << fmt(x.y()) << ' ' << fmt(x.z()) << '\n';
  out << "POLYGONS " << quads.size() << ' ' << 5 * quads.size() << '\n';
  for (const auto& q : quads) out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  out << "CELL_DATA " << quads.size() << "\nSCALARS patch int 1\nLOOKUP_TABLE default\n";
  for (int p : patch_of) out << p << '\n';
}

void write_fields_vtk(std::ostream& out, const std::vector<FieldBlock>& blocks, int n) {
  std::vector<Vec3> pts, bs, hs;
  std::vector<double> nus;
  std::vector<std::array<int, 8>> hexes;
  for (const auto& blk : blocks) {
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(blk.rotation, Vec3::UnitZ()).toRotationMatrix();
    const auto& model = blk.space->model();
    for (int p = 0; p < model.size(); ++p) {
      const int base = static_cast<int>(pts.size());
      for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
          for (int i = 0; i <= n; ++i) {
            const auto s = evaluate_fields(*blk.space, *blk.coeffs, *blk.materials, p,
                                           Vec3(double(i) / n, double(j) / n, double(k) / n));
            pts.push_back(rot * s.point);
            bs.push_back(rot * s.B);
            hs.push_back(rot * s.H);
            nus.push_back(blk.materials->nu(model.regions[p].material));
          }
      auto id = [&](int i, int j, int k) { return base + i + (n + 1) * (j + (n + 1) * k); };
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i)
            hexes.push_back({id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k),
                             id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1),
                             id(i, j + 1, k + 1)});
    }
  }
  out << "# vtk DataFile Version 3.0\nmagnetic field\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS "
      << pts.size() << " double\n";
  for (const auto& x : pts) out << fmt(x.x()) << ' ' << fmt(x.y()) << ' ' << fmt(x.z()) << '\n';
  out << "CELLS " << hexes.size() << ' ' << 9 * hexes.size() << '\n';
  for (const auto& h : hexes) {
    out << 8;
    for (int v : h) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << hexes.size() << '\n';
  for (std::size_t c = 0; c < hexes.size(); ++c) out << "12\n";
  out << "POINT_DATA " << pts.size() << "\nVECTORS B double\n";
  for (const auto& b : bs) out << fmt(b.x()) << ' ' << fmt(b.y()) << ' ' << fmt(b.z()) << '\n';
  out << "VECTORS H double\n";
  for (const auto& h : hs) out << fmt(h.x()) << ' ' << fmt(h.y()) << ' ' << fmt(h.z()) << '\n';
  out << "SCALARS reluctivity double 1\nLOOKUP_TABLE default\n";
  for (double v : nus) out << fmt(v) << '\n';
}

}  // namespace isomortar
