// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the solver only through the C API.

#include <chhs/chhs.h>

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kConfig = 2,
  kSolver = 3,
  kIo = 4,
  kEnergyLaw = 5,
  kInternal = 6,
};

int exit_code(chhs_status s) {
  switch (s) {
    case CHHS_OK: return kOk;
    case CHHS_ERR_CONFIG:
    case CHHS_ERR_UNSUPPORTED: return kConfig;
    case CHHS_ERR_SOLVER:
    case CHHS_ERR_ASSEMBLY: return kSolver;
    case CHHS_ERR_IO: return kIo;
    case CHHS_ERR_ENERGY_LAW: return kEnergyLaw;
    case CHHS_ERR_INVALID_ARGUMENT:
    case CHHS_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

int report(chhs_status s) {
  std::fprintf(stderr, "chhs: %s: %s\n", chhs_status_string(s), chhs_last_error());
  return exit_code(s);
}

std::string echo(const chhs_config* cfg) {
  size_t needed = 0;
  chhs_config_echo(cfg, nullptr, 0, &needed);
  std::string text(needed, '\0');
  chhs_config_echo(cfg, text.data(), text.size(), &needed);
  text.resize(needed - 1);
  return text;
}

struct ConfigGuard {
  chhs_config* ptr = nullptr;
  ~ConfigGuard() { chhs_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard-Hele-Shaw finite element solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(chhs_version()));

  std::string config_path;
  std::string scenario;
  std::string output_dir;
  long long seed = -1;
  bool dry_run = false;
  bool quiet = false;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "Key-value configuration file")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario, "Start from a preset instead of a file")
      ->check(CLI::IsMember({"convergence", "spinodal", "interface-breakup", "custom"}));
  app.add_option("--output", output_dir, "Output directory (overrides output_dir)");
  app.add_option("--seed", seed, "Random seed (overrides seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--set", overrides, "Extra key=value override, repeatable");
  app.add_flag("--dry-run", dry_run, "Validate and print the resolved configuration without stepping");
  app.add_flag("-q,--quiet", quiet, "No progress output");

  auto* run = app.add_subcommand("run", "Time-step one configuration")->fallthrough();
  auto* converge = app.add_subcommand("converge", "Cauchy convergence study over the configured levels")->fallthrough();
  auto* check = app.add_subcommand("check-energy", "Short run; fails if any step violates the energy law")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (config_path.empty() == scenario.empty()) {
    std::fprintf(stderr, "chhs: give exactly one of --config or --scenario\n");
    return kUsage;
  }

  ConfigGuard cfg;
  chhs_status s = config_path.empty() ? chhs_config_create(scenario.c_str(), &cfg.ptr)
                                      : chhs_config_load(config_path.c_str(), &cfg.ptr);
  if (s != CHHS_OK) return report(s);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "chhs: --set expects key=value, got '%s'\n", kv.c_str());
      return kUsage;
    }
    s = chhs_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != CHHS_OK) return report(s);
  }
  if (!output_dir.empty() && (s = chhs_config_set(cfg.ptr, "output_dir", output_dir.c_str())) != CHHS_OK) {
    return report(s);
  }
  if (seed >= 0 && (s = chhs_config_set(cfg.ptr, "seed", std::to_string(seed).c_str())) != CHHS_OK) {
    return report(s);
  }
  if ((s = chhs_config_validate(cfg.ptr)) != CHHS_OK) return report(s);

  if (dry_run) {
    std::fputs(echo(cfg.ptr).c_str(), stdout);
    return kOk;
  }
  const int verbose = quiet ? 0 : 1;

  if (*run) {
    int steps = 0;
    s = chhs_run(cfg.ptr, verbose, &steps);
    if (s != CHHS_OK) return report(s);
    if (!quiet) std::printf("completed %d steps\n", steps);
    return kOk;
  }

  if (*converge) {
    chhs_convergence* table = nullptr;
    s = chhs_converge(cfg.ptr, verbose, &table);
    if (s != CHHS_OK) return report(s);
    size_t needed = 0;
    chhs_convergence_format(table, nullptr, 0, &needed);
    std::string text(needed, '\0');
    chhs_convergence_format(table, text.data(), text.size(), &needed);
    std::fputs(text.c_str(), stdout);
    chhs_convergence_destroy(table);
    return kOk;
  }

  if (*check) {
    chhs_energy_report rep{};
    s = chhs_check_energy(cfg.ptr, verbose, &rep);
    if (s == CHHS_OK || s == CHHS_ERR_ENERGY_LAW) {
      std::printf("energy law: %d steps, %d violations, worst residual/(1+|E_app|) = %.3e at step %d (tolerance %.1e)\n",
                  rep.steps, rep.violations, rep.worst_ratio, rep.worst_step, rep.tolerance);
    }
    return s == CHHS_OK ? kOk : report(s);
  }
  return kUsage;
}
