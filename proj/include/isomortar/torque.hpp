// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_TORQUE_HPP
#define ISOMORTAR_TORQUE_HPP

#include <optional>
#include <string>
#include <vector>

#include "isomortar/machine.hpp"

namespace isomortar {

enum class Side { Rotor, Stator };

/// T = int int B_r H_theta R^2 dtheta dz on the interface, both factors from
/// the chosen side. normal_sign = -1 evaluates with the flipped normal.
double torque_surface(const MortarProblem& problem, const AngleSolution& sol, Side side,
                      double normal_sign = 1);

/// T = -int int B_r lambda_3 R^2 dtheta dz with B_r from the chosen side.
double torque_lagrange(const MortarProblem& problem, const AngleSolution& sol, Side side);

/// Radial average of the surface torque over the side's air-gap piece:
/// (1/delta) int B_r H_theta r dV.
double torque_arkkio(const MortarProblem& problem, const AngleSolution& sol, Side side);

struct MethodSelection {
  bool surface = true;
  bool lagrange = true;
  bool arkkio = true;
};

struct TorqueResult {
  double alpha = 0;
  std::optional<double> surface_rotor, surface_stator;
  std::optional<double> lagrange_rotor, lagrange_stator;
  std::optional<double> arkkio_rotor, arkkio_stator;
  double residual = 0;
  double wall_time = 0;
  bool ok = false;
  std::string error;
};

TorqueResult compute_torques(const MortarProblem& problem, const AngleSolution& sol,
                             const MethodSelection& methods);

/// One solve per angle; a failing angle is reported in its result and the
/// sweep continues.
std::vector<TorqueResult> sweep(const MortarProblem& problem, const std::vector<double>& angles,
                                const MethodSelection& methods = {});

}  // namespace isomortar

#endif  // ISOMORTAR_TORQUE_HPP
