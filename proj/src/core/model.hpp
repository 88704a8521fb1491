// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

namespace chhs {

enum class ViscosityModel {
  Constant,         // eta = eta1
  LinearTruncated,  // (1+phi)/2 eta1 + (1-phi)/2 eta2 on [-1,1], clamped outside
};

enum class MobilityModel {
  Constant,               // m = mobility
  RegularizedDegenerate,  // sqrt((1+phi)^2 (1-phi)^2 + eps^2)
};

/// Physical constants of the Cahn-Hilliard-Hele-Shaw model.
struct ModelParams {
  double epsilon = 0.05;
  double peclet = 20.0;
  double gamma = 0.005;
  ViscosityModel eta_model = ViscosityModel::LinearTruncated;
  double eta1 = 0.0042;
  double eta2 = 0.083;
  MobilityModel mobility_model = MobilityModel::RegularizedDegenerate;
  double mobility = 1.0;
  /// Buoyancy coefficient; 0 disables the body force.
  double lambda = 0.0;
  /// Mean order parameter used by the buoyancy term. Taken from the initial
  /// datum when unset.
  std::optional<double> phi_bar;

  /// Lower viscosity bound (the eta1 of the pressure stabilisation).
  double eta_min() const { return eta1; }
  void validate() const;
};

double eta_of_phi(double phi, const ModelParams& params);
double mobility_of_phi(double phi, const ModelParams& params);

/// Double-well density (phi^2 - 1)^2 / 4.
inline double double_well(double phi) {
  const double s = phi * phi - 1.0;
  return 0.25 * s * s;
}

std::string to_string(ViscosityModel m);
std::string to_string(MobilityModel m);
ViscosityModel viscosity_model_from_string(const std::string& s);
MobilityModel mobility_model_from_string(const std::string& s);

}  // namespace chhs
