#include "pgw/univariate.hpp"

#include <cmath>

#include "pgw/errors.hpp"

namespace pgw {

namespace {

constexpr double kSmallTau = 1e-6;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_time(double t) {
  if (!(t >= 0.0) || std::isnan(t)) throw DomainError("time must be >= 0");
}

void check_probability(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("probability must lie in (0, 1)");
}

// Value of x^(gamma - k) times a positive factor at x = 0, for derivative terms.
double power_at_zero(double exponent) {
  if (exponent > 0.0) return 0.0;
  if (exponent == 0.0) return 1.0;
  return kInfinity;
}

}  // namespace

void PgwParams::validate() const {
  if (!positive_finite(gamma) || !positive_finite(kappa) || !positive_finite(lambda) ||
      !positive_finite(phi))
    throw DomainError("PgwParams: all parameters must be finite and positive");
}

void ApgwParams::validate() const {
  if (!positive_finite(gamma) || !positive_finite(lambda) || !positive_finite(phi))
    throw DomainError("ApgwParams: gamma, lambda, phi must be finite and positive");
  if (std::isnan(tau) || !(tau > -1.0) || tau == -kInfinity)
    throw DomainError("ApgwParams: tau must exceed -1");
}

std::string_view to_string(HazardShape shape) {
  switch (shape) {
    case HazardShape::kConstant: return "constant";
    case HazardShape::kIncreasing: return "increasing";
    case HazardShape::kDecreasing: return "decreasing";
    case HazardShape::kUpThenDown: return "up-then-down";
    case HazardShape::kDownThenUp: return "down-then-up";
  }
  return "unknown";
}

UnitChf pgw_unit_chf(double t, double gamma, double kappa, double phi) {
  check_time(t);
  UnitChf out;
  if (t == 0.0) {
    out.derivative = phi * kappa * gamma * power_at_zero(gamma - 1.0);
    out.log_derivative = std::log(out.derivative);
    out.second_derivative = gamma == 1.0
        ? phi * phi * kappa * (kappa - 1.0)
        : phi * phi * kappa * gamma * (gamma - 1.0) * power_at_zero(gamma - 2.0);
    return out;
  }
  const double log_x = std::log(phi * t);
  const double u = std::exp(gamma * log_x);
  const double log1p_u = std::log1p(u);
  out.log1p_value = kappa * log1p_u;
  out.value = std::expm1(out.log1p_value);
  out.log_derivative =
      std::log(phi * kappa * gamma) + (gamma - 1.0) * log_x + (kappa - 1.0) * log1p_u;
  out.derivative = std::exp(out.log_derivative);
  out.second_derivative = phi * phi * kappa * gamma *
      std::exp((gamma - 2.0) * log_x + (kappa - 2.0) * log1p_u) *
      ((gamma - 1.0) * (1.0 + u) + (kappa - 1.0) * gamma * u);
  return out;
}

UnitChf apgw_unit_chf(double t, double gamma, double tau, double phi) {
  check_time(t);
  UnitChf out;
  const bool infinite_tau = std::isinf(tau);
  if (t == 0.0) {
    out.derivative = phi * gamma * power_at_zero(gamma - 1.0);
    out.log_derivative = std::log(out.derivative);
    if (gamma == 1.0) {
      // d/dt of phi (1 + phi t/(tau+1))^(tau-1) at 0.
      const double slope = infinite_tau ? 1.0 : (tau - 1.0) / (tau + 1.0);
      out.second_derivative = phi * phi * slope;
    } else {
      out.second_derivative = phi * phi * gamma * (gamma - 1.0) * power_at_zero(gamma - 2.0);
    }
    return out;
  }

  const double log_x = std::log(phi * t);
  const double u = std::exp(gamma * log_x);
  const double log_prefactor = std::log(phi * gamma) + (gamma - 1.0) * log_x;

  if (infinite_tau) {
    out.value = std::expm1(u);
    out.log1p_value = u;
    out.log_derivative = log_prefactor + u;
    out.derivative = std::exp(out.log_derivative);
    out.second_derivative = phi * phi * gamma *
        std::exp((gamma - 2.0) * log_x + u) * ((gamma - 1.0) + gamma * u);
    return out;
  }

  const double c = std::log1p(u / (tau + 1.0));
  if (std::abs(tau) < kSmallTau) {
    // expm1(tau c)/tau to second order; exact Burr limit at tau = 0.
    out.value = (tau + 1.0) * c * (1.0 + tau * c / 2.0 + tau * tau * c * c / 6.0);
    out.log1p_value = std::log1p(out.value);
  } else {
    const double tc = tau * c;
    out.value = (tau + 1.0) / tau * std::expm1(tc);
    out.log1p_value = tau > 0.0 ? tc + std::log1p(-std::expm1(-tc) / tau)
                                : std::log1p(out.value);
  }
  out.log_derivative = log_prefactor + (tau - 1.0) * c;
  out.derivative = std::exp(out.log_derivative);
  const double base = 1.0 + u / (tau + 1.0);
  out.second_derivative = phi * phi * gamma *
      std::exp((gamma - 2.0) * log_x + (tau - 2.0) * c) *
      ((gamma - 1.0) * base + (tau - 1.0) * gamma * u / (tau + 1.0));
  return out;
}

double chf_pgw(double t, const PgwParams& p) {
  p.validate();
  return p.lambda * pgw_unit_chf(t, p.gamma, p.kappa, p.phi).value;
}

double hazard_pgw(double t, const PgwParams& p) {
  p.validate();
  return p.lambda * pgw_unit_chf(t, p.gamma, p.kappa, p.phi).derivative;
}

double survival_pgw(double t, const PgwParams& p) { return std::exp(-chf_pgw(t, p)); }

double quantile_pgw(double u, const PgwParams& p) {
  p.validate();
  check_probability(u);
  const double y = -std::log(u) / p.lambda;
  const double x_gamma = std::expm1(std::log1p(y) / p.kappa);
  return std::pow(x_gamma, 1.0 / p.gamma) / p.phi;
}

double chf_apgw(double t, const ApgwParams& p) {
  p.validate();
  return p.lambda * apgw_unit_chf(t, p.gamma, p.tau, p.phi).value;
}

double survival_apgw(double t, const ApgwParams& p) { return std::exp(-chf_apgw(t, p)); }

double hazard_apgw(double t, const ApgwParams& p) {
  p.validate();
  return p.lambda * apgw_unit_chf(t, p.gamma, p.tau, p.phi).derivative;
}

double density_apgw(double t, const ApgwParams& p) {
  p.validate();
  const UnitChf h = apgw_unit_chf(t, p.gamma, p.tau, p.phi);
  if (h.derivative == 0.0 || std::isinf(h.value)) return 0.0;
  return std::exp(std::log(p.lambda) + h.log_derivative - p.lambda * h.value);
}

double cure_fraction(const ApgwParams& p) {
  p.validate();
  if (p.tau >= 0.0) return 0.0;
  return std::exp(p.lambda * (p.tau + 1.0) / p.tau);
}

double inverse_unit_chf_apgw(double y, double gamma, double tau) {
  if (!(y >= 0.0)) throw DomainError("inverse_unit_chf_apgw: y must be >= 0");
  double x_gamma;
  if (std::isinf(tau)) {
    x_gamma = std::log1p(y);
  } else if (std::abs(tau) < kSmallTau) {
    const double w = y / (tau + 1.0);
    // log1p(tau w)/tau to second order in tau.
    const double c = w * (1.0 - tau * w / 2.0 + tau * tau * w * w / 3.0);
    x_gamma = (tau + 1.0) * std::expm1(c);
  } else {
    const double arg = tau * y / (tau + 1.0);
    if (!(arg > -1.0)) throw NoSolutionError("cumulative hazard beyond the cure limit");
    x_gamma = (tau + 1.0) * std::expm1(std::log1p(arg) / tau);
  }
  return std::pow(x_gamma, 1.0 / gamma);
}

double quantile_apgw(double u, const ApgwParams& p) {
  p.validate();
  check_probability(u);
  if (p.is_cure_model() && u <= cure_fraction(p))
    throw NoSolutionError("quantile_apgw: probability at or below the cure fraction");
  return inverse_unit_chf_apgw(-std::log(u) / p.lambda, p.gamma, p.tau) / p.phi;
}

HazardShape classify_hazard_shape(double gamma, double kappa) {
  if (!positive_finite(gamma) || !positive_finite(kappa))
    throw DomainError("classify_hazard_shape: gamma and kappa must be positive");
  const double tail = kappa * gamma;
  if (gamma == 1.0 && kappa == 1.0) return HazardShape::kConstant;
  if (gamma <= 1.0 && tail <= 1.0) return HazardShape::kDecreasing;
  if (gamma >= 1.0 && tail >= 1.0) return HazardShape::kIncreasing;
  if (gamma >= 1.0 && tail <= 1.0) return HazardShape::kUpThenDown;
  return HazardShape::kDownThenUp;
}

double pgw_to_apgw_time(double t, double gamma, double tau) {
  check_time(t);
  if (!positive_finite(gamma) || !positive_finite(tau))
    throw DomainError("pgw_to_apgw_time: gamma and tau must be finite and positive");
  const double r = std::pow(1.0 + std::pow(t, gamma), tau);
  const double inner = std::pow(tau + 1.0, 1.0 - 1.0 / tau) * std::pow(1.0 + tau * r, 1.0 / tau) -
                       (tau + 1.0);
  return std::pow(std::max(inner, 0.0), 1.0 / gamma);
}

}  // namespace pgw
