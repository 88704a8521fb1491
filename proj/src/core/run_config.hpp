// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/mesh.hpp"
#include "core/model.hpp"
#include "core/scheme.hpp"

namespace chhs {

enum class Scenario { Convergence, Spinodal, InterfaceBreakup, Custom };
enum class InitialKind { Cosine, Random, Layers, Constant };

std::string to_string(Scenario s);
std::string to_string(InitialKind k);
Scenario scenario_from_string(const std::string& s);
InitialKind initial_kind_from_string(const std::string& s);

/// Everything a run needs. Built from a scenario preset, then overridden key by key.
struct RunConfig {
  Scenario scenario = Scenario::Custom;
  Rectangle domain;
  int n = 32;
  int order = 1;
  ModelParams model;
  SchemeConfig scheme;
  /// When set, the time step is dt_over_h * h (h = cell diagonal) and `scheme.dt` is derived.
  std::optional<double> dt_over_h;
  double final_time = 0.2;
  int output_cadence = 10;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "output";

  InitialKind initial = InitialKind::Cosine;
  double initial_mean = -0.05;
  double initial_amplitude = 0.05;
  double initial_value = 0.0;

  /// Mesh sizes of the convergence harness.
  std::vector<int> levels;
  /// Step count of check-energy runs (0: use final_time).
  int check_steps = 0;
  /// Energy-law slack relative to 1 + |E_app|.
  double energy_tolerance = 1e-8;

  double h() const;
  double time_step() const;
  /// ceil(T / k), robust to round-off in T / k.
  int step_count() const;
  /// Resolves dt from dt_over_h and checks every invariant.
  void validate() const;
};

/// Defaults of a scenario.
RunConfig preset(Scenario s);

/// Sets one key. Unknown keys and malformed values throw ConfigError.
void set_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines ('#' starts a comment). The scenario key is
/// applied first, whatever its position, so presets can be overridden.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Every resolved key in parse_config format; parsing the echo reproduces the config.
std::string echo(const RunConfig& cfg);

}  // namespace chhs
