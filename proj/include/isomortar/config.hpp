// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_CONFIG_HPP
#define ISOMORTAR_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "isomortar/geometry.hpp"
#include "isomortar/torque.hpp"

namespace isomortar {

/// Everything one batch run needs.
struct RunConfig {
  MachineConfig machine;
  std::vector<double> angles{0.0};
  MethodSelection methods;
  double tolerance = 1e-10;
  int threads = 1;
  int quadrature_points = 0;  ///< 0 means p + 2
  std::string csv_path;       ///< empty writes to standard output
  bool record_timing = false;
  std::string export_fields;
  std::string dump_dir;
};

/// Parses the INI-style file; ConfigError messages name the file, line,
/// section and key.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in, const std::string& name = "<config>");

/// "a:b:n" (n points from a to b inclusive) or a comma separated list.
std::vector<double> parse_angles(const std::string& text);
/// Comma separated subset of surface, lagrange, arkkio (or "all").
MethodSelection parse_methods(const std::string& text);

/// Validates everything that load_config can't check per key.
void validate(const RunConfig& cfg);

}  // namespace isomortar

#endif  // ISOMORTAR_CONFIG_HPP
