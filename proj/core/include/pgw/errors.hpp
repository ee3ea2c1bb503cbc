#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgw {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative numerical procedure hit its cap. Carries the last estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Objective returned a non-finite value at a finite-difference probe.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t coordinate)
      : std::runtime_error(what), coordinate_(coordinate) {}
  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t coordinate_;
};

/// An inverse problem has no finite solution (e.g. a quantile inside a cure fraction).
class NoSolutionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input data; message carries file position when known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every optimizer start failed.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, std::vector<std::string> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace pgw
