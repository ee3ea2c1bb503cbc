#include "pgw/copula.hpp"

#include <algorithm>
#include <cmath>

#include "pgw/errors.hpp"

namespace pgw {

void CopulaParams::validate() const {
  if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("CopulaParams: omega must lie in (0, 1]");
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw DomainError("CopulaParams: lambda must be finite and positive");
}

double log_sum_exp_minus_one(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi > 30.0) return hi + std::log1p(std::exp(lo - hi) - std::exp(-hi));
  return std::log1p(std::expm1(a) + std::expm1(b));
}

namespace {

void check_unit(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("copula arguments must lie strictly inside (0, 1)");
}

double bb9_unchecked(double u, double v, double omega, double lambda) {
  const double a = std::log1p(-std::log(u) / lambda) / omega;
  const double b = std::log1p(-std::log(v) / lambda) / omega;
  return std::exp(-lambda * std::expm1(omega * log_sum_exp_minus_one(a, b)));
}

}  // namespace

double bb9_cdf(double u, double v, const CopulaParams& p) {
  p.validate();
  check_unit(u);
  check_unit(v);
  return bb9_unchecked(u, v, p.omega, p.lambda);
}

double gumbel_cdf(double u, double v, double omega) {
  if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("gumbel_cdf: omega must lie in (0, 1]");
  check_unit(u);
  check_unit(v);
  const double a = std::log(-std::log(u)) / omega;
  const double b = std::log(-std::log(v)) / omega;
  const double hi = std::max(a, b);
  const double lse = hi + std::log1p(std::exp(std::min(a, b) - hi));
  return std::exp(-std::exp(omega * lse));
}

double bb9_generator(double s, const CopulaParams& p) {
  p.validate();
  if (!(s >= 0.0)) throw DomainError("bb9_generator: s must be >= 0");
  return std::exp(-p.lambda * std::expm1(p.omega * std::log1p(s)));
}

double bb9_generator_inverse(double u, const CopulaParams& p) {
  p.validate();
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("bb9_generator_inverse: u must lie in (0, 1]");
  return std::expm1(std::log1p(-std::log(u) / p.lambda) / p.omega);
}

double kendall_tau(const CopulaParams& p) {
  p.validate();
  if (p.omega == 1.0) return 0.0;
  // (2 lambda)^(1/omega) e^(2 lambda) Gamma(2 - 1/omega, 2 lambda) = z Q with Q scaled.
  const double a = 2.0 - 1.0 / p.omega;
  const double z = 2.0 * p.lambda;
  const double q = scaled_upper_incomplete_gamma(a, z);
  return 1.0 - p.omega * (1.0 - z * (q - 1.0));
}

double kendall_tau_oracle(const CopulaParams& p) {
  p.validate();
  if (p.omega == 1.0) return 0.0;
  // Generator integral after the exact substitution 2 lambda {(1 + s)^omega - 1} = y.
  const double z = 2.0 * p.lambda;
  const double w = p.omega;
  auto integrand = [z, w](double y) {
    const double x = 1.0 + y / z;
    return w * (z + y - z * std::pow(x, 1.0 - 1.0 / w)) * std::exp(-y);
  };
  return 1.0 - integrate_1d(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-10);
}

double spearman_rho(const CopulaParams& p, const QuadratureSpec& spec) {
  p.validate();
  spec.validate();
  if (p.omega == 1.0) return 0.0;
  const double omega = p.omega;
  const double lambda = p.lambda;
  // By symmetry int int C = 2 int_0^1 int_0^1 u C(u, u s) ds du, which moves
  // the diagonal kink of C onto the boundary s = 1.
  auto folded = [omega, lambda](double u, double s) {
    return 2.0 * u * bb9_unchecked(u, u * s, omega, lambda);
  };
  return 12.0 * integrate_2d(folded, spec) - 3.0;
}

double spearman_bound(double omega) {
  if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("spearman_bound: omega must lie in (0, 1]");
  const double denom = 1.0 + std::exp2(1.0 - omega);
  const double bound = 3.0 * (std::exp2(2.0 * (2.0 - omega)) / (denom * denom) - 1.0);
  return std::min(bound, 1.0);
}

}  // namespace pgw
