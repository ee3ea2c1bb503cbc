#pragma once

#include "pgw/numerics.hpp"

namespace pgw {

/// BB9 / power-variance survival copula
/// C(u, v) = exp[lambda - {(lambda - log u)^(1/omega) + (lambda - log v)^(1/omega) - lambda^(1/omega)}^omega].
///
/// lambda = 0 and omega = 0 are limits, not parameter values.
struct CopulaParams {
  double omega = 0.5;  // (0, 1]; 1 is independence
  double lambda = 1.0; // > 0

  void validate() const;
};

/// log(e^a + e^b - 1) for a, b >= 0, accurate when either is tiny or huge.
double log_sum_exp_minus_one(double a, double b);

double bb9_cdf(double u, double v, const CopulaParams& p);
double gumbel_cdf(double u, double v, double omega);

/// Generator exp[lambda {1 - (1 + s)^omega}] and its inverse.
double bb9_generator(double s, const CopulaParams& p);
double bb9_generator_inverse(double u, const CopulaParams& p);

/// Closed form via the scaled upper incomplete gamma function. In [0, 1 - omega].
double kendall_tau(const CopulaParams& p);

/// 1 - 4 int_0^inf s phi'(s)^2 ds by adaptive quadrature. Independent of the
/// incomplete gamma code; exists to check kendall_tau.
double kendall_tau_oracle(const CopulaParams& p);

/// 12 int int C - 3 by tensor Gauss-Legendre with node doubling.
double spearman_rho(const CopulaParams& p, const QuadratureSpec& spec = {});

/// min[3 {2^(2(2-omega)) / (1 + 2^(1-omega))^2 - 1}, 1]; 1 for omega <= 1 + log2(sqrt(3) - 1).
double spearman_bound(double omega);

}  // namespace pgw
