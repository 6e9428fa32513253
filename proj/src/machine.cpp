// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/machine.hpp"

#include <cmath>

namespace isomortar {

SideDiscretization discretize_side(std::shared_ptr<const MultipatchModel> model,
                                   const std::vector<std::string>& dirichlet,
                                   const ProblemOptions& options,
                                   const VectorField& extra_current) {
  SideDiscretization s;
  s.model = model;
  s.space = build_edge_space(model, options.degree);
  s.bc = apply_essential_bc(s.space, dirichlet);
  s.split = build_tree(build_control_graph(s.space, s.bc), options.tree);
  s.K = assemble_stiffness(s.space, options.materials, options.assembly);
  s.f = assemble_rhs(s.space, options.materials, options.assembly, extra_current);
  s.K_reduced = reduce_matrix(s.K, s.split);
  if (options.check_gauge) check_nonsingular(s.K_reduced);
  if (model->annular) {
    for (int p = 0; p < model->size(); ++p) {
      if (model->regions[p].material != "airgap") continue;
      const double t = interface_arc(model->patches[p], 1).radius -
                       interface_arc(model->patches[p], 0).radius;
      if (s.airgap_patches.empty())
        s.airgap_thickness = t;
      else if (std::abs(t - s.airgap_thickness) > 1e-12 * std::abs(t))
        throw GeometryError("air-gap patches have different radial thickness");
      s.airgap_patches.push_back(p);
    }
  }
  return s;
}

MortarProblem::MortarProblem(std::shared_ptr<const MultipatchModel> rotor,
                             std::shared_ptr<const MultipatchModel> stator, ProblemOptions options)
    : options_(std::move(options)) {
  trace_ = build_trace_space(*stator, options_.interface_tag, options_.degree,
                             options_.multiplier_degree);
  rotor_ = discretize_side(std::move(rotor), options_.rotor_dirichlet, options_,
                           options_.rotor_extra_current);
  stator_ = discretize_side(std::move(stator), options_.stator_dirichlet, options_,
                            options_.stator_extra_current);
  if (options_.gauge_multiplier) multiplier_basis_ = multiplier_gauge_basis(trace_);
}

SaddleSystem MortarProblem::system(double alpha, MortarInterface* mesh_out,
                                   Coupling* coupling_out) const {
  MortarInterface mesh = build_intersection_mesh(stator_.space, rotor_.space, trace_, alpha,
                                                 options_.interface_tag);
  Coupling c = assemble_coupling(mesh, stator_.space, rotor_.space, trace_, options_.coupling);
  SaddleSystem s;
  s.K = block_diagonal({rotor_.K_reduced, stator_.K_reduced});
  SparseMatrix b = hstack({reduce_columns(c.rotor, rotor_.split), reduce_columns(c.stator, stator_.split)});
  if (options_.gauge_multiplier) b = SparseMatrix(multiplier_basis_.transpose() * b);
  s.B = b;
  s.f.resize(s.K.rows());
  s.f << reduce_vector(rotor_.f, rotor_.split), reduce_vector(stator_.f, stator_.split);
  if (mesh_out) *mesh_out = std::move(mesh);
  if (coupling_out) *coupling_out = std::move(c);
  return s;
}

AngleSolution MortarProblem::solve(double alpha) const {
  AngleSolution out;
  const SaddleSystem s = system(alpha, &out.mesh, &out.coupling);
  out.alpha = out.mesh.alpha;
  out.diagnostics = solve_saddle(s, options_.solve);
  const int nr = rotor_.split.num_cotree();
  out.u_rotor = expand(out.diagnostics.u.head(nr), rotor_.split);
  out.u_stator = expand(out.diagnostics.u.tail(stator_.split.num_cotree()), stator_.split);
  out.lambda = options_.gauge_multiplier ? Eigen::VectorXd(multiplier_basis_ * out.diagnostics.lambda)
                                         : out.diagnostics.lambda;
  return out;
}

ProblemOptions machine_problem_options(const MachineConfig& cfg) {
  ProblemOptions o;
  o.degree = cfg.degree;
  o.multiplier_degree = cfg.multiplier_degree;
  o.materials = Materials::machine(cfg.iron_relative_permeability);
  return o;
}

}  // namespace isomortar
