// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "core/fields.hpp"
#include "core/run_config.hpp"

namespace chhs {

/// 0.24 cos(2 pi x) cos(2 pi y) + 0.4 cos(pi x) cos(3 pi y)
double cosine_datum(double x, double y);

/// Light layer between y1,2(x) = pi -/+ (0.5 + 0.1 cos x) inside heavy fluid.
double layers_datum(double x, double y, double epsilon);

/// Uniform mesh and Lagrange space described by the config.
std::shared_ptr<const FeSpace> make_space(const RunConfig& cfg);

/// Initial order parameter of the configured kind. Random values are drawn
/// per dof, in dof order, uniform on [mean - amplitude, mean + amplitude).
FieldVector initial_condition(const RunConfig& cfg, std::shared_ptr<const FeSpace> space);

}  // namespace chhs
