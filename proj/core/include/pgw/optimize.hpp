#pragma once

#include <string>

#include <Eigen/Dense>

#include "pgw/numerics.hpp"

namespace pgw {

/// Damped Newton minimizer with finite-difference derivatives.
///
/// Each step solves with the Hessian's eigenvalues replaced by
/// max(|w|, eigen_floor), then halves the step until the objective decreases.
struct NewtonOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-4;  // max-norm required for `converged`
  double stop_gradient = 1e-6;       // iteration stops below this max-norm
  double stop_step = 1e-8;           // or when the accepted step is this small
  double gradient_step = 1e-6;
  double hessian_step = 1e-4;
  double eigen_floor = 1e-6;
  double min_damping = 1e-10;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Minimizes f from x0. f may return large finite values to mark invalid points.
NewtonResult minimize_newton(const Objective& f, const Eigen::VectorXd& x0,
                             const NewtonOptions& options = {});

}  // namespace pgw
