// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_ERRORS_HPP
#define ISOMORTAR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace isomortar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Raised when the multiplier degree gap p - q is not odd.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Raised when tree elimination leaves a singular stiffness block.
class GaugeError : public Error {
 public:
  GaugeError(const std::string& what, int kernel_dimension)
      : Error(what), kernel_dimension_(kernel_dimension) {}
  int kernel_dimension() const { return kernel_dimension_; }

 private:
  int kernel_dimension_;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Iterative refinement did not reach the requested residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace isomortar

#endif  // ISOMORTAR_ERRORS_HPP
