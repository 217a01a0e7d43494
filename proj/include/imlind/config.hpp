// Copyright 2026 The imlind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <yaml-cpp/yaml.h>

#include "imlind/sweep.hpp"

namespace imlind {

namespace detail {

template <typename T>
void read_into(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

}  // namespace detail

/// Loads a run description from YAML (nested blocks, comments allowed).
/// Unknown model kinds, out-of-range grids and unknown observable labels are
/// rejected here rather than mid-sweep.
inline SweepConfig config_from_yaml(const YAML::Node& root) {
  SweepConfig cfg;
  if (const auto m = root["model"]) {
    std::string kind, boundary;
    detail::read_into(m, "kind", kind);
    if (!kind.empty()) cfg.model.kind = model_kind_from_string(kind);
    detail::read_into(m, "n_sites", cfg.model.n_sites);
    detail::read_into(m, "boundary", boundary);
    if (!boundary.empty()) cfg.model.boundary = boundary_from_string(boundary);
    detail::read_into(m, "corner", cfg.model.corner);
    detail::read_into(m, "a", cfg.model.a);
    detail::read_into(m, "b", cfg.model.b);
    detail::read_into(m, "beta_T", cfg.model.beta_T);
    detail::read_into(m, "stabilizers", cfg.model.stabilizers);
    detail::read_into(m, "excitations", cfg.model.excitations);
  }
  if (const auto g = root["grid"]) {
    detail::read_into(g, "a_min", cfg.grid.a_min);
    detail::read_into(g, "a_max", cfg.grid.a_max);
    detail::read_into(g, "a_steps", cfg.grid.a_steps);
    detail::read_into(g, "b_min", cfg.grid.b_min);
    detail::read_into(g, "b_max", cfg.grid.b_max);
    detail::read_into(g, "b_steps", cfg.grid.b_steps);
  }
  if (const auto s = root["solver"]) {
    std::string method;
    detail::read_into(s, "method", method);
    if (method == "dense")
      cfg.solver.method = SolverMethod::dense;
    else if (method == "iterative")
      cfg.solver.method = SolverMethod::iterative;
    else if (method == "auto" || method.empty())
      cfg.solver.method = SolverMethod::automatic;
    else
      throw ConfigError("unknown solver method \"" + method + "\"");
    detail::read_into(s, "k", cfg.solver.k);
    detail::read_into(s, "seed", cfg.solver.seed);
    detail::read_into(s, "tol", cfg.solver.tol);
    detail::read_into(s, "max_iter", cfg.solver.max_iter);
  }
  if (const auto o = root["observables"])
    cfg.observables = o.as<std::vector<std::string>>();
  if (const auto o = root["output"]) {
    detail::read_into(o, "directory", cfg.output.directory);
    if (o["formats"]) {
      cfg.output.csv = false;
      cfg.output.json = false;
      for (const auto& f : o["formats"].as<std::vector<std::string>>()) {
        if (f == "csv")
          cfg.output.csv = true;
        else if (f == "json")
          cfg.output.json = true;
        else
          throw ConfigError("unknown output format \"" + f + "\"");
      }
    }
  }
  cfg.validate();
  return cfg;
}

inline SweepConfig load_config(const std::string& path) {
  try {
    return config_from_yaml(YAML::LoadFile(path));
  } catch (const YAML::Exception& e) {
    throw ConfigError("failed to load \"" + path + "\": " + e.what());
  }
}

inline SweepConfig parse_config(const std::string& text) {
  try {
    return config_from_yaml(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("failed to parse config: ") + e.what());
  }
}

}  // namespace imlind
