// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace isomortar {

namespace {

namespace pt = boost::property_tree;

/// Line number of every "key =" line, keyed by "section.key".
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line, section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    boost::algorithm::trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = boost::algorithm::trim_copy(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq != std::string::npos)
      lines[section + "." + boost::algorithm::trim_copy(line.substr(0, eq))] = n;
  }
  return lines;
}

template <class T>
T convert(const std::string& value) {
  if constexpr (std::is_same_v<T, bool>) {
    const auto v = boost::algorithm::to_lower_copy(value);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw boost::bad_lexical_cast();
  } else {
    return boost::lexical_cast<T>(value);
  }
}

}  // namespace

std::vector<double> parse_angles(const std::string& text) {
  const auto t = boost::algorithm::trim_copy(text);
  std::vector<std::string> parts;
  std::vector<double> out;
  try {
    if (t.find(':') != std::string::npos) {
      boost::algorithm::split(parts, t, boost::is_any_of(":"));
      if (parts.size() != 3) throw ConfigError("angles: expected start:stop:count, got '" + t + "'");
      const double a = boost::lexical_cast<double>(boost::algorithm::trim_copy(parts[0]));
      const double b = boost::lexical_cast<double>(boost::algorithm::trim_copy(parts[1]));
      const int n = boost::lexical_cast<int>(boost::algorithm::trim_copy(parts[2]));
      if (n < 1) throw ConfigError("angles: count must be at least 1");
      for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
      boost::algorithm::split(parts, t, boost::is_any_of(","));
      for (const auto& p : parts) out.push_back(boost::lexical_cast<double>(boost::algorithm::trim_copy(p)));
    }
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("angles: cannot parse '" + t + "'");
  }
  if (out.empty()) throw ConfigError("angles: empty list");
  return out;
}

MethodSelection parse_methods(const std::string& text) {
  MethodSelection m{false, false, false};
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  for (auto p : parts) {
    boost::algorithm::trim(p);
    boost::algorithm::to_lower(p);
    if (p == "surface") m.surface = true;
    else if (p == "lagrange") m.lagrange = true;
    else if (p == "arkkio") m.arkkio = true;
    else if (p == "all") m = MethodSelection{};
    else throw ConfigError("methods: unknown method '" + p + "' (surface, lagrange, arkkio, all)");
  }
  return m;
}

RunConfig parse_config(std::istream& in, const std::string& name) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  pt::ptree tree;
  try {
    std::istringstream s(text);
    pt::read_ini(s, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  const auto lines = key_lines(text);

  RunConfig cfg;
  auto& m = cfg.machine;
  using Setter = std::function<void(const std::string&)>;
  auto num = [](auto& field) -> Setter {
    return [&field](const std::string& v) { field = convert<std::decay_t<decltype(field)>>(v); };
  };
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"machine",
       {{"shaft_radius", num(m.shaft_radius)},
        {"rotor_outer_radius", num(m.rotor_outer_radius)},
        {"interface_radius", num(m.interface_radius)},
        {"stator_inner_radius", num(m.stator_inner_radius)},
        {"stator_outer_radius", num(m.stator_outer_radius)},
        {"magnet_thickness", num(m.magnet_thickness)},
        {"winding_thickness", num(m.winding_thickness)},
        {"axial_length", num(m.axial_length)},
        {"pole_pairs", num(m.pole_pairs)},
        {"magnet_remanence", num(m.magnet_remanence)},
        {"magnet_arc_fraction", num(m.magnet_arc_fraction)},
        {"current_density", num(m.current_density)},
        {"current_phase", num(m.current_phase)},
        {"iron_relative_permeability", num(m.iron_relative_permeability)}}},
      {"discretization",
       {{"degree", num(m.degree)},
        {"multiplier_degree", num(m.multiplier_degree)},
        {"radial_elements", num(m.radial_elements)},
        {"rotor_elements_per_pole", num(m.rotor_elements_per_pole)},
        {"stator_elements_per_belt", num(m.stator_elements_per_belt)},
        {"axial_elements", num(m.axial_elements)},
        {"refinement", num(m.refinement)},
        {"quadrature_points", num(cfg.quadrature_points)}}},
      {"sweep",
       {{"angles", [&](const std::string& v) { cfg.angles = parse_angles(v); }},
        {"methods", [&](const std::string& v) { cfg.methods = parse_methods(v); }}}},
      {"solver", {{"tolerance", num(cfg.tolerance)}, {"threads", num(cfg.threads)}}},
      {"output",
       {{"csv", [&](const std::string& v) { cfg.csv_path = v; }},
        {"record_timing", num(cfg.record_timing)},
        {"export_fields", [&](const std::string& v) { cfg.export_fields = v; }},
        {"dump_matrices", [&](const std::string& v) { cfg.dump_dir = v; }}}},
  };

  for (const auto& [section, keys] : tree) {
    auto where = [&](const std::string& key) {
      const auto it = lines.find(section + "." + key);
      return name + ":" + (it == lines.end() ? std::string("?") : std::to_string(it->second)) +
             ": [" + section + "] " + key;
    };
    if (!keys.data().empty() && keys.empty())
      throw ConfigError(name + ": key '" + section + "' outside of any section");
    const auto sec = schema.find(section);
    if (sec == schema.end()) throw ConfigError(name + ": unknown section [" + section + "]");
    for (const auto& [key, value] : keys) {
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) throw ConfigError(where(key) + ": unknown key");
      try {
        setter->second(value.data());
      } catch (const boost::bad_lexical_cast&) {
        throw ConfigError(where(key) + ": invalid value '" + value.data() + "'");
      } catch (const ConfigError& e) {
        throw ConfigError(where(key) + ": " + e.what());
      }
    }
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void validate(const RunConfig& cfg) {
  cfg.machine.validate();
  if (!(cfg.tolerance > 0 && cfg.tolerance < 1)) throw ConfigError("solver.tolerance must be in (0, 1)");
  if (cfg.threads < 1) throw ConfigError("solver.threads must be at least 1");
  if (cfg.quadrature_points < 0) throw ConfigError("discretization.quadrature_points must be >= 0");
  if (cfg.angles.empty()) throw ConfigError("sweep.angles is empty");
  if (!cfg.methods.surface && !cfg.methods.lagrange && !cfg.methods.arkkio)
    throw ConfigError("sweep.methods selects nothing");
}

}  // namespace isomortar
