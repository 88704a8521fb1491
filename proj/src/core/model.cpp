// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/model.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace chhs {

void ModelParams::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
  require(std::isfinite(peclet) && peclet > 0.0, "peclet must be > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  require(std::isfinite(eta1) && eta1 > 0.0, "eta1 must be > 0");
  if (eta_model == ViscosityModel::LinearTruncated) {
    require(std::isfinite(eta2) && eta2 >= eta1, "eta2 must satisfy eta2 >= eta1 > 0");
  }
  if (mobility_model == MobilityModel::Constant) {
    require(std::isfinite(mobility) && mobility > 0.0, "mobility must be > 0");
  }
  require(std::isfinite(lambda), "lambda must be finite");
  if (phi_bar) require(std::isfinite(*phi_bar), "phi_bar must be finite");
}

double eta_of_phi(double phi, const ModelParams& p) {
  if (p.eta_model == ViscosityModel::Constant) return p.eta1;
  if (phi > 1.0) return p.eta1;
  if (phi < -1.0) return p.eta2;
  return 0.5 * (1.0 + phi) * p.eta1 + 0.5 * (1.0 - phi) * p.eta2;
}

double mobility_of_phi(double phi, const ModelParams& p) {
  if (p.mobility_model == MobilityModel::Constant) return p.mobility;
  const double a = (1.0 + phi) * (1.0 - phi);
  return std::sqrt(a * a + p.epsilon * p.epsilon);
}

std::string to_string(ViscosityModel m) {
  return m == ViscosityModel::Constant ? "constant" : "linear_truncated";
}

std::string to_string(MobilityModel m) {
  return m == MobilityModel::Constant ? "constant" : "regularized_degenerate";
}

ViscosityModel viscosity_model_from_string(const std::string& s) {
  if (s == "constant") return ViscosityModel::Constant;
  if (s == "linear_truncated" || s == "linear") return ViscosityModel::LinearTruncated;
  throw ConfigError("unknown eta_model '" + s + "' (expected constant|linear_truncated)");
}

MobilityModel mobility_model_from_string(const std::string& s) {
  if (s == "constant") return MobilityModel::Constant;
  if (s == "regularized_degenerate" || s == "degenerate") return MobilityModel::RegularizedDegenerate;
  throw ConfigError("unknown mobility_model '" + s + "' (expected constant|regularized_degenerate)");
}

}  // namespace chhs
