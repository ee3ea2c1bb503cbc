#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace pgw {

/// Settings for the tensor Gauss-Legendre integrator on (0,1)^2.
struct QuadratureSpec {
  int node_count = 64;             // starting nodes per axis
  double relative_tolerance = 1e-6;
  double absolute_tolerance = 1e-12;
  int max_node_count = 4096;       // doubling stops here

  void validate() const;
};

// ---------------------------------------------------------------------------
// Incomplete gamma

/// Upper incomplete gamma function Gamma(a, z) = int_z^inf x^(a-1) e^(-x) dx.
/// Any real a; z must be positive.
double upper_incomplete_gamma(double a, double z);

/// e^z z^(1-a) Gamma(a, z). Bounded for all arguments (tends to 1 as z grows)
/// and the form in which callers with extreme (a, z) should work.
double scaled_upper_incomplete_gamma(double a, double z);

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss-Legendre rule mapped to (0,1).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre_unit(int n);

/// Adaptive Gauss-Kronrod on [lo, hi]; hi may be +infinity.
/// Throws ConvergenceError when the error estimate misses the tolerance.
double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    double relative_tolerance = 1e-10, double absolute_tolerance = 0.0);

/// Tensor Gauss-Legendre estimate of int_0^1 int_0^1 f(u, v) du dv, doubling
/// the node count until successive estimates agree to the relative tolerance.
double integrate_2d(const std::function<double(double, double)>& f,
                    const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------
// Finite differences

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Central-difference step: h_i = max(floor, relative * |x_i|).
struct StepRule {
  double floor = 1e-5;
  double relative = 1e-7;

  double step(double x) const;
};

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x,
                                 const StepRule& rule = {});

/// Second differences lose about eps / h^2 to rounding, so the default step is
/// near eps^(1/4) rather than the gradient's.
inline constexpr StepRule kHessianStep{1e-4, 1e-4};

/// Central-difference Hessian, symmetrized as (H + H^T) / 2.
Eigen::MatrixXd numeric_hessian(const Objective& f, const Eigen::VectorXd& x,
                                const StepRule& rule = kHessianStep);

/// Forward-difference Hessian using the step rule of R's nlm(hessian = TRUE):
/// h_i = eta * max(x_i, 1) with eta = 10^(-ndigit/3), ndigit = 12.
/// First-order accurate only; kept so published standard errors can be
/// reproduced.
Eigen::MatrixXd forward_hessian_nlm(const Objective& f, const Eigen::VectorXd& x,
                                    double eta = 1e-4);

}  // namespace pgw
