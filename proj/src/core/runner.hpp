// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/run_config.hpp"
#include "core/scheme.hpp"

namespace chhs {

struct RunOptions {
  /// diagnostics.csv, run.cfg and VTK snapshots in cfg.output_dir.
  bool write_files = true;
  /// Progress lines; null for silence.
  std::ostream* log = nullptr;
  /// Overrides the step count derived from final_time.
  std::optional<int> steps;
  /// Called with the initial state (diagnostics of step 0) and after every step.
  std::function<void(const State&, const StepDiagnostics&)> observer;
};

struct RunSummary {
  int steps = 0;
  double phi_bar = 0.0;
  /// Step 0 first.
  std::vector<StepDiagnostics> history;
  std::optional<State> final_state;
};

/// Diagnostics of the initial state (residual and iteration counts zero).
StepDiagnostics initial_diagnostics(const DecoupledScheme& scheme, const State& s);

/// The time loop. Solver failures propagate as StepError after the CSV has
/// been flushed up to the last completed step.
RunSummary run(const RunConfig& cfg, const RunOptions& options = {});

enum class CauchyMeasure {
  Coarse,  // restrict the fine solution, norms on the coarse mesh
  Fine,    // prolong the coarse solution, norms on the fine mesh
};

struct CauchyPairNorms {
  CauchyDifference phi;
  CauchyDifference p;
};

struct ConvergencePair {
  int coarse = 0;
  int fine = 0;
  CauchyPairNorms on_coarse;
  CauchyPairNorms on_fine;

  const CauchyPairNorms& get(CauchyMeasure m) const { return m == CauchyMeasure::Coarse ? on_coarse : on_fine; }
};

/// rate[i] = log2(diff[i] / diff[i+1]).
struct RateSet {
  std::vector<double> phi_h1;
  std::vector<double> phi_l2;
  std::vector<double> p_h1;
  std::vector<double> p_l2;
};

struct ConvergenceTable {
  std::vector<int> levels;
  std::vector<ConvergencePair> pairs;
  RateSet coarse_rates;
  RateSet fine_rates;

  const RateSet& rates(CauchyMeasure m) const { return m == CauchyMeasure::Coarse ? coarse_rates : fine_rates; }
};

/// Runs every level along the configured refinement path (dt_over_h fixed)
/// and compares successive final states in both measures.
ConvergenceTable convergence_harness(const RunConfig& base, const std::vector<int>& levels,
                                     const RunOptions& options = {});

/// Rows per norm and field, columns "32-64 rate 64-128 ...".
std::string format_table(const ConvergenceTable& t);

struct EnergyCheckReport {
  int steps = 0;
  int violations = 0;
  /// max over steps of residual / (1 + |E_app|)
  double worst_ratio = 0.0;
  int worst_step = 0;
  double tolerance = 0.0;

  bool passed() const { return violations == 0; }
};

/// Short run checking the modified energy law at every step. Requires lambda = 0.
EnergyCheckReport check_energy(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace chhs
