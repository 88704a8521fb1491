// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chhs {

enum class ErrorKind {
  Configuration,
  Unsupported,
  Assembly,
  Solver,
  Io,
  EnergyLaw,
};

/// Base class for every error raised by the core library. The kind maps
/// one-to-one onto the status codes of the C API and the CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::Unsupported, what) {}
};

class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& what) : Error(ErrorKind::Assembly, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(ErrorKind::Solver, what) {}
};

/// Newton failure. Carries the last iterate so callers can inspect it.
class NewtonError : public SolverError {
 public:
  NewtonError(const std::string& what, std::vector<double> last_iterate, double residual_norm,
              int iterations)
      : SolverError(what),
        last_iterate_(std::move(last_iterate)),
        residual_norm_(residual_norm),
        iterations_(iterations) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double residual_norm() const noexcept { return residual_norm_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  double residual_norm_;
  int iterations_;
};

/// A time step failed; wraps the underlying solver message with the step index.
class StepError : public SolverError {
 public:
  StepError(int step, double residual_norm, const std::string& what)
      : SolverError(what), step_(step), residual_norm_(residual_norm) {}
  int step() const noexcept { return step_; }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  int step_;
  double residual_norm_;
};

class EnergyLawViolation : public Error {
 public:
  explicit EnergyLawViolation(const std::string& what) : Error(ErrorKind::EnergyLaw, what) {}
};

}  // namespace chhs
