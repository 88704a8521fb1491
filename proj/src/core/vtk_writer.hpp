// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/scheme.hpp"

namespace chhs {

/// L2 projection of a quadrature-point velocity onto the nodal space.
std::vector<std::array<double, 2>> nodal_velocity(const FormAssembler& assembler, const SpaceOperators& ops,
                                                  const QpVectorField& u);

/// Legacy VTK ASCII snapshot of phi, mu, p and (if given) the nodal velocity,
/// all as POINT_DATA on the dof triangulation.
void write_fields(const std::string& path, const State& state,
                  const std::vector<std::array<double, 2>>* velocity = nullptr);

}  // namespace chhs
