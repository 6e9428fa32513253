// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_MACHINE_HPP
#define ISOMORTAR_MACHINE_HPP

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

#include "isomortar/assembly.hpp"
#include "isomortar/gauge.hpp"
#include "isomortar/mortar.hpp"
#include "isomortar/solve.hpp"
#include "isomortar/spaces.hpp"

namespace isomortar {

struct ProblemOptions {
  int degree = 2;
  int multiplier_degree = 1;
  Materials materials;
  std::vector<std::string> rotor_dirichlet{"shaft", "zmin", "zmax"};
  std::vector<std::string> stator_dirichlet{"outer", "zmin", "zmax"};
  std::string interface_tag = "interface";
  TreeOptions tree;
  AssemblyOptions assembly;
  CouplingOptions coupling;
  SolveOptions solve;
  VectorField rotor_extra_current;
  VectorField stator_extra_current;
  /// Restrict the multiplier to the subspace annihilating surface gradients.
  bool gauge_multiplier = true;
  /// Factorize each reduced stiffness block once and report a left kernel.
  bool check_gauge = true;
};

/// Everything about one subdomain that does not depend on the angle.
struct SideDiscretization {
  std::shared_ptr<const MultipatchModel> model;
  EdgeSpace space;
  DofConstraints bc;
  TreeCotreeSplit split;
  SparseMatrix K;          ///< full edge-space stiffness
  SparseMatrix K_reduced;  ///< cotree block
  Eigen::VectorXd f;
  std::vector<int> airgap_patches;  ///< patches of material "airgap"
  double airgap_thickness = 0;      ///< radial extent of the air-gap piece
};

SideDiscretization discretize_side(std::shared_ptr<const MultipatchModel> model,
                                   const std::vector<std::string>& dirichlet,
                                   const ProblemOptions& options,
                                   const VectorField& extra_current);

struct AngleSolution {
  double alpha = 0;
  MortarInterface mesh;
  Eigen::VectorXd u_rotor;   ///< full edge coefficients, rotor frame
  Eigen::VectorXd u_stator;
  Eigen::VectorXd lambda;    ///< full multiplier coefficients
  Coupling coupling;         ///< unreduced coupling blocks
  SaddleSolution diagnostics;
};

/// Rotor and stator coupled through the sliding interface. The rotor is
/// discretized once in its own frame; only the coupling depends on alpha.
class MortarProblem {
 public:
  MortarProblem(std::shared_ptr<const MultipatchModel> rotor,
                std::shared_ptr<const MultipatchModel> stator, ProblemOptions options);

  AngleSolution solve(double alpha) const;
  /// The reduced KKT system at alpha (for export and tests).
  SaddleSystem system(double alpha, MortarInterface* mesh = nullptr,
                      Coupling* coupling = nullptr) const;

  const SideDiscretization& rotor() const { return rotor_; }
  const SideDiscretization& stator() const { return stator_; }
  const TraceSpace& trace() const { return trace_; }
  const SparseMatrix& multiplier_basis() const { return multiplier_basis_; }
  const ProblemOptions& options() const { return options_; }

 private:
  ProblemOptions options_;
  SideDiscretization rotor_;
  SideDiscretization stator_;
  TraceSpace trace_;
  SparseMatrix multiplier_basis_;
};

/// Problem options for the slotless machine described by cfg.
ProblemOptions machine_problem_options(const MachineConfig& cfg);

}  // namespace isomortar

#endif  // ISOMORTAR_MACHINE_HPP
