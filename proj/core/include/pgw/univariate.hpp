#pragma once

#include <limits>
#include <string_view>

namespace pgw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Power generalized Weibull: c.h.f. lambda * {(1 + (phi t)^gamma)^kappa - 1}.
struct PgwParams {
  double gamma = 1.0;   // power
  double kappa = 1.0;   // distribution choice
  double lambda = 1.0;  // vertical scale (PH)
  double phi = 1.0;     // horizontal scale (AFT)

  void validate() const;
};

/// Adapted PGW: c.h.f. lambda * ((tau+1)/tau) * {(1 + (phi t)^gamma / (tau+1))^tau - 1}.
///
/// tau = 0 is the Burr XII limit lambda * log(1 + (phi t)^gamma), tau = +inf the
/// Weibull-extension limit lambda * (exp((phi t)^gamma) - 1). For -1 < tau < 0
/// the survival function is improper (cure model).
struct ApgwParams {
  double gamma = 1.0;
  double tau = 1.0;
  double lambda = 1.0;
  double phi = 1.0;

  void validate() const;
  bool is_cure_model() const { return tau < 0.0; }
};

/// Hazard shapes of the PGW family. The labels follow the PGW literature, which
/// calls up-then-down "bathtub" and down-then-up "upside-down bathtub"; the
/// common usage is the reverse.
enum class HazardShape { kConstant, kIncreasing, kDecreasing, kUpThenDown, kDownThenUp };

std::string_view to_string(HazardShape shape);

/// A unit-lambda cumulative hazard H(t) and its time derivatives, with the
/// log-scale quantities the bivariate code needs when H is huge.
struct UnitChf {
  double value = 0.0;            // H(t)
  double log1p_value = 0.0;      // log(1 + H(t))
  double derivative = 0.0;       // H'(t)
  double log_derivative = 0.0;   // log H'(t)
  double second_derivative = 0.0;// H''(t)
};

/// H_N(phi t; gamma, kappa) with lambda = 1.
UnitChf pgw_unit_chf(double t, double gamma, double kappa, double phi);
/// H_A(phi t; gamma, tau) with lambda = 1, including the tau = 0 and tau = inf limits.
UnitChf apgw_unit_chf(double t, double gamma, double tau, double phi);

double chf_pgw(double t, const PgwParams& p);
double hazard_pgw(double t, const PgwParams& p);
double survival_pgw(double t, const PgwParams& p);
double quantile_pgw(double u, const PgwParams& p);

double chf_apgw(double t, const ApgwParams& p);
double survival_apgw(double t, const ApgwParams& p);
double density_apgw(double t, const ApgwParams& p);
double hazard_apgw(double t, const ApgwParams& p);

/// lim S(t) as t -> inf: exp{lambda (tau+1)/tau} for a cure model, else 0.
double cure_fraction(const ApgwParams& p);

/// Time t with survival_apgw(t) = u, by closed-form inversion.
/// Throws NoSolutionError when u does not exceed the cure fraction.
double quantile_apgw(double u, const ApgwParams& p);

/// Inverse of the unit APGW c.h.f.: x with H_A(x; gamma, tau) = y (phi = 1).
double inverse_unit_chf_apgw(double y, double gamma, double tau);

HazardShape classify_hazard_shape(double gamma, double kappa);

/// Maps a PGW(gamma, tau, lambda) time to the APGW(gamma, tau, lambda) time with
/// the same survival probability (closed form for 0 < tau < inf). Not used by the
/// fitting code; exists to check that the two constructions of the bivariate
/// APGW model agree.
double pgw_to_apgw_time(double t, double gamma, double tau);

}  // namespace pgw
