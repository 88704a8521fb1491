// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "core/errors.hpp"

namespace chhs {

double cosine_datum(double x, double y) {
  using std::numbers::pi;
  return 0.24 * std::cos(2.0 * pi * x) * std::cos(2.0 * pi * y) + 0.4 * std::cos(pi * x) * std::cos(3.0 * pi * y);
}

double layers_datum(double x, double y, double epsilon) {
  using std::numbers::pi;
  const double offset = 0.5 + 0.1 * std::cos(x);
  const double w = std::sqrt(2.0) * epsilon;
  return std::tanh((y - (pi - offset)) / w) * std::tanh((y - (pi + offset)) / w);
}

std::shared_ptr<const FeSpace> make_space(const RunConfig& cfg) {
  auto mesh = std::make_shared<const Mesh>(generate_uniform_mesh(cfg.domain, cfg.n));
  return std::make_shared<const FeSpace>(mesh, cfg.order);
}

FieldVector initial_condition(const RunConfig& cfg, std::shared_ptr<const FeSpace> space) {
  switch (cfg.initial) {
    case InitialKind::Cosine:
      return interpolate(cosine_datum, std::move(space));
    case InitialKind::Layers: {
      const double eps = cfg.model.epsilon;
      return interpolate([eps](double x, double y) { return layers_datum(x, y, eps); }, std::move(space));
    }
    case InitialKind::Constant: {
      const double c = cfg.initial_value;
      return interpolate([c](double, double) { return c; }, std::move(space));
    }
    case InitialKind::Random: {
      if (!cfg.seed) throw ConfigError("random initial condition requires a seed");
      std::mt19937_64 rng(*cfg.seed);
      std::vector<double> v(space->n_dofs());
      for (double& x : v) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = cfg.initial_mean + cfg.initial_amplitude * (2.0 * u - 1.0);
      }
      return FieldVector(std::move(space), std::move(v));
    }
  }
  throw ConfigError("unknown initial condition kind");
}

}  // namespace chhs
