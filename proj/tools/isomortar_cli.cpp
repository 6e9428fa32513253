// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "isomortar/config.hpp"
#include "isomortar/io.hpp"
#include "isomortar/machine.hpp"
#include "isomortar/torque.hpp"

namespace {

using namespace isomortar;

enum ExitCode { kOk = 0, kConfig = 2, kSolver = 3, kPartial = 4 };

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void dump(const MortarProblem& problem, double alpha, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  MortarInterface mesh;
  const SaddleSystem s = problem.system(alpha, &mesh);
  auto o = open_out(dir / "kkt.txt");
  write_coordinate(o, kkt_matrix(s));
  auto f = open_out(dir / "rhs.txt");
  write_vector(f, s.f);
  auto kr = open_out(dir / "K_rotor.txt");
  write_coordinate(kr, problem.rotor().K);
  auto ks = open_out(dir / "K_stator.txt");
  write_coordinate(ks, problem.stator().K);
  auto tr = open_out(dir / "tree_rotor.txt");
  write_split(tr, problem.rotor().split);
  auto ts = open_out(dir / "tree_stator.txt");
  write_split(ts, problem.stator().split);
  auto c = open_out(dir / "cells.txt");
  write_cells(c, mesh);
}

int run(const RunConfig& cfg) {
  const MachineModel machine = build_machine(cfg.machine);
  ProblemOptions options = machine_problem_options(cfg.machine);
  options.assembly.threads = cfg.threads;
  options.assembly.points = cfg.quadrature_points;
  options.coupling.threads = cfg.threads;
  options.solve.tolerance = cfg.tolerance;
  const MortarProblem problem(std::make_shared<MultipatchModel>(machine.rotor),
                              std::make_shared<MultipatchModel>(machine.stator), options);

  if (!cfg.dump_dir.empty()) dump(problem, cfg.angles.front(), cfg.dump_dir);
  if (!cfg.export_fields.empty()) {
    const AngleSolution sol = problem.solve(cfg.angles.front());
    auto out = open_out(cfg.export_fields);
    write_fields_vtk(out, {{&problem.rotor().space, &sol.u_rotor, &options.materials, sol.alpha},
                           {&problem.stator().space, &sol.u_stator, &options.materials, 0}});
  }

  const auto rows = sweep(problem, cfg.angles, cfg.methods);
  if (cfg.csv_path.empty()) {
    write_torque_csv(std::cout, rows, cfg.record_timing);
  } else {
    auto out = open_out(cfg.csv_path);
    write_torque_csv(out, rows, cfg.record_timing);
  }
  int failed = 0;
  for (const auto& r : rows)
    if (!r.ok) {
      ++failed;
      std::cerr << "angle " << r.alpha << " failed: " << r.error << '\n';
    }
  if (failed == 0) return kOk;
  return failed == static_cast<int>(rows.size()) ? kSolver : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mortar-coupled isogeometric magnetostatics for slotless machines"};
  std::string config, angles, methods, export_fields, dump_dir;
  int threads = 0;
  app.add_option("--config", config, "INI run configuration")->required();
  app.add_option("--angles", angles, "rotation angles a:b:n or a list (rad)");
  app.add_option("--methods", methods, "surface,lagrange,arkkio or all");
  app.add_option("--export-fields", export_fields, "VTK file with B and H at the first angle");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--dump-matrices", dump_dir, "directory for KKT, trees and mortar cells");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    RunConfig cfg = load_config(config);
    if (!angles.empty()) cfg.angles = parse_angles(angles);
    if (!methods.empty()) cfg.methods = parse_methods(methods);
    if (!export_fields.empty()) cfg.export_fields = export_fields;
    if (!dump_dir.empty()) cfg.dump_dir = dump_dir;
    if (threads > 0) cfg.threads = threads;
    validate(cfg);
    return run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const GaugeError& e) {
    std::cerr << "gauge error (kernel dimension " << e.kernel_dimension() << "): " << e.what()
              << '\n';
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
}
