// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_ASSEMBLY_HPP
#define ISOMORTAR_ASSEMBLY_HPP

#include <Eigen/Core>

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "isomortar/spaces.hpp"

namespace isomortar {

/// Reluctivity table keyed by region material name.
struct Materials {
  std::map<std::string, double> reluctivity;

  /// Throws ConfigError for an unknown material.
  double nu(const std::string& material) const;

  /// Vacuum everywhere except "rotor_iron" and "stator_iron".
  static Materials machine(double iron_relative_permeability);
  /// Every material in the model gets reluctivity nu.
  static Materials uniform(const MultipatchModel& model, double nu);
};

struct AssemblyOptions {
  int points = 0;   ///< Gauss points per direction, 0 means p + 2
  int threads = 1;
};

/// K_ij = sum_k (nu curl w_j, curl w_i)_{Omega_k} on all edge dofs.
SparseMatrix assemble_stiffness(const EdgeSpace& space, const Materials& materials,
                                const AssemblyOptions& options = {});

/// f_i = (J, w_i) + (M, curl w_i) with J and M from the model regions plus
/// an optional extra current density.
Eigen::VectorXd assemble_rhs(const EdgeSpace& space, const Materials& materials,
                             const AssemblyOptions& options = {},
                             const VectorField& extra_current = nullptr);

/// Magnetization of a region at physical point x.
Vec3 region_magnetization(const Region& region, const Vec3& x);

struct FieldSample {
  Vec3 point;
  Vec3 A;
  Vec3 B;
  Vec3 H;
  double B_r = 0;
  double B_theta = 0;
  double H_theta = 0;
};

/// B = curl A, H = nu B - M and their cylindrical components at a reference
/// point of a patch.
FieldSample evaluate_fields(const EdgeSpace& space, const Eigen::VectorXd& coeffs,
                            const Materials& materials, int patch, const Vec3& xi);

/// Radial and angular components of v at x.
inline std::pair<double, double> cylindrical_components(const Vec3& x, const Vec3& v) {
  const double r = std::hypot(x.x(), x.y());
  const double c = x.x() / r, s = x.y() / r;
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

using VolumeIntegrand = std::function<double(int patch, const FieldEvaluator::Sample&)>;

/// Element-wise Gauss quadrature of integrand(A, curl A) over the given
/// patches (all patches when empty).
double integrate(const EdgeSpace& space, const Eigen::VectorXd& coeffs,
                 const VolumeIntegrand& integrand, const std::vector<int>& patches = {},
                 int points = 0);

}  // namespace isomortar

#endif  // ISOMORTAR_ASSEMBLY_HPP
