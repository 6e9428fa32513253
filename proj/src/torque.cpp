// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/torque.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "isomortar/quadrature.hpp"

namespace isomortar {

namespace {

/// Sum over merged interface cells of w * g(theta, zeta) with w the
/// surface measure R dtheta dz (so R^2 dtheta dz integrands pass R).
double interface_quadrature(const MortarProblem& problem, const AngleSolution& sol,
                            const std::function<double(int cell, double theta, double zeta)>& g) {
  const auto& mesh = sol.mesh;
  const int p = problem.options().degree;
  const GaussRule gt = gauss_legendre(std::max(p, problem.trace().degree()) + 2);
  const GaussRule gz = gauss_legendre(p + 2);
  double total = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (std::size_t zc = 0; zc + 1 < mesh.z_breakpoints.size(); ++zc) {
      const double za = mesh.z_breakpoints[zc], zb = mesh.z_breakpoints[zc + 1];
      for (int iz = 0; iz < gz.size(); ++iz)
        for (int it = 0; it < gt.size(); ++it) {
          const double theta = cell.theta0 + (cell.theta1 - cell.theta0) * gt.points[it];
          const double zeta = za + (zb - za) * gz.points[iz];
          total += gt.weights[it] * (cell.theta1 - cell.theta0) * gz.weights[iz] * (zb - za) *
                   mesh.length * mesh.radius * g(c, theta, zeta);
        }
    }
  }
  return total;
}

FieldSample side_fields(const MortarProblem& problem, const AngleSolution& sol, Side side,
                        int cell, double theta, double zeta) {
  const auto& mesh = sol.mesh;
  if (side == Side::Rotor) {
    const auto& span = mesh.rotor[mesh.cells[cell].rotor_span];
    return evaluate_fields(problem.rotor().space, sol.u_rotor, problem.options().materials,
                           span.patch, span_reference_point(span, theta - mesh.alpha, zeta));
  }
  const auto& span = mesh.stator[mesh.cells[cell].stator_span];
  return evaluate_fields(problem.stator().space, sol.u_stator, problem.options().materials,
                         span.patch, span_reference_point(span, theta, zeta));
}

}  // namespace

double torque_surface(const MortarProblem& problem, const AngleSolution& sol, Side side,
                      double normal_sign) {
  const double r = sol.mesh.radius;
  return normal_sign * interface_quadrature(problem, sol, [&](int c, double t, double z) {
           const auto f = side_fields(problem, sol, side, c, t, z);
           return f.B_r * f.H_theta * r;
         });
}

double torque_lagrange(const MortarProblem& problem, const AngleSolution& sol, Side side) {
  const auto& mesh = sol.mesh;
  const double r = mesh.radius;
  return -interface_quadrature(problem, sol, [&](int c, double t, double z) {
    const auto f = side_fields(problem, sol, side, c, t, z);
    const auto lam = evaluate_multiplier(problem.trace(), sol.lambda, t, mesh.z0 + z * mesh.length);
    return f.B_r * lam.lambda3() * r;
  });
}

double torque_arkkio(const MortarProblem& problem, const AngleSolution& sol, Side side) {
  const auto& d = side == Side::Rotor ? problem.rotor() : problem.stator();
  const auto& u = side == Side::Rotor ? sol.u_rotor : sol.u_stator;
  if (d.airgap_patches.empty() || !(d.airgap_thickness > 0))
    throw ConfigError("Arkkio torque needs an air-gap piece of positive thickness on the " +
                      std::string(side == Side::Rotor ? "rotor" : "stator") + " side");
  const auto& materials = problem.options().materials;
  const auto& model = *d.model;
  const double integral = integrate(
      d.space, u,
      [&](int patch, const FieldEvaluator::Sample& s) {
        const double nu = materials.nu(model.regions[patch].material);
        const Vec3 h = nu * s.curl - region_magnetization(model.regions[patch], s.point);
        const double br = cylindrical_components(s.point, s.curl).first;
        const double ht = cylindrical_components(s.point, h).second;
        return br * ht * std::hypot(s.point.x(), s.point.y());
      },
      d.airgap_patches);
  return integral / d.airgap_thickness;
}

TorqueResult compute_torques(const MortarProblem& problem, const AngleSolution& sol,
                             const MethodSelection& methods) {
  TorqueResult r;
  r.alpha = sol.alpha;
  r.residual = std::max(sol.diagnostics.primal_residual, sol.diagnostics.constraint_residual);
  if (methods.surface) {
    r.surface_rotor = torque_surface(problem, sol, Side::Rotor);
    r.surface_stator = torque_surface(problem, sol, Side::Stator);
  }
  if (methods.lagrange) {
    r.lagrange_rotor = torque_lagrange(problem, sol, Side::Rotor);
    r.lagrange_stator = torque_lagrange(problem, sol, Side::Stator);
  }
  if (methods.arkkio) {
    r.arkkio_rotor = torque_arkkio(problem, sol, Side::Rotor);
    r.arkkio_stator = torque_arkkio(problem, sol, Side::Stator);
  }
  r.ok = true;
  return r;
}

std::vector<TorqueResult> sweep(const MortarProblem& problem, const std::vector<double>& angles,
                                const MethodSelection& methods) {
  std::vector<TorqueResult> out;
  for (double alpha : angles) {
    const auto t0 = std::chrono::steady_clock::now();
    TorqueResult r;
    try {
      r = compute_torques(problem, problem.solve(alpha), methods);
    } catch (const Error& e) {
      r = TorqueResult{};
      r.error = e.what();
    }
    r.alpha = alpha;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace isomortar
