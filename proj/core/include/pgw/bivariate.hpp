#pragma once

#include <string>

#include "pgw/copula.hpp"
#include "pgw/univariate.hpp"

namespace pgw {

enum class Family { kPgw, kApgw };

std::string_view to_string(Family family);

/// Shape block of one margin. The scale lambda lives on the model.
struct MarginShape {
  double gamma = 1.0;
  double tau = 1.0;  // PGW: marginal kappa (> 0); APGW: tau > -1 or +inf
  double phi = 1.0;
};

/// Bivariate survival S(t1, t2) = exp[lambda {1 - L^omega}] with
/// L = (1 + H_1)^(1/omega) + (1 + H_2)^(1/omega) - 1, H_i the unit-lambda
/// marginal cumulative hazard. Margins are PGW(gamma_i, tau_i, lambda) or
/// APGW(gamma_i, tau_i, lambda) with the copula's lambda.
struct BivariateModel {
  double lambda = 1.0;
  double omega = 0.5;
  MarginShape margin1;
  MarginShape margin2;
  Family family = Family::kApgw;

  void validate() const;
  CopulaParams copula() const { return {omega, lambda}; }
  ApgwParams apgw_margin(int which) const;
  PgwParams pgw_margin(int which) const;
  const MarginShape& margin(int which) const;
  /// The same model with the two margins exchanged.
  BivariateModel swapped() const;
};

/// Unit-lambda c.h.f. of one margin of the model, with derivatives.
UnitChf margin_chf(double t, const MarginShape& m, Family family);
double margin_survival(double t, const BivariateModel& model, int which);
double margin_hazard(double t, const BivariateModel& model, int which);
double margin_quantile(double u, const BivariateModel& model, int which);

/// L and its partial derivatives. l20 is the second derivative in t1
/// (and l02 in t2); the mixed derivative vanishes because L is additive.
struct LValue {
  double l = 1.0;
  double l10 = 0.0;
  double l01 = 0.0;
  double l20 = 0.0;
  double l02 = 0.0;
  double log_l = 0.0;
  double log_l10 = 0.0;  // -inf when l10 = 0
  double log_l01 = 0.0;
};

LValue l_value(double t1, double t2, const BivariateModel& model);

double joint_survival(double t1, double t2, const BivariateModel& model);

struct SurvivalPartials {
  double s = 1.0;
  double ds_dt1 = 0.0;
  double ds_dt2 = 0.0;
  double d2s = 0.0;
  double log_s = 0.0;
  double log_neg_ds_dt1 = 0.0;
  double log_neg_ds_dt2 = 0.0;
  double log_d2s = 0.0;
};

SurvivalPartials survival_partials(double t1, double t2, const BivariateModel& model);

/// Log-likelihood contribution of one right-censored pair.
double log_contribution(double t1, bool event1, double t2, bool event2,
                        const BivariateModel& model);

/// h(t1 | T2 >= t2) and h(t1 | T2 = t2).
double cond_hazard_ge(double t1, double t2, const BivariateModel& model);
double cond_hazard_eq(double t1, double t2, const BivariateModel& model);

/// Clayton's cross ratio 1 + (1 - omega) / (lambda omega L^omega).
double cross_ratio(double t1, double t2, const BivariateModel& model);

enum class Conditioning { kAtLeast, kEqual };
enum class Monotonicity { kNone, kIncreasing, kDecreasing };

std::string_view to_string(Monotonicity m);

struct ShapeScanReport {
  Monotonicity guaranteed = Monotonicity::kNone;  // what the parameters promise
  std::string observed;                            // constant/increasing/decreasing/...
  int violations = 0;                              // grid steps against the promise
  int points = 0;                                  // grid points before the hazard overflows
  bool confirmed = true;                           // violations == 0 or no promise
};

/// Monotonicity the parameters guarantee for the conditional hazard of margin
/// `which` given the other margin.
Monotonicity guaranteed_monotonicity(const BivariateModel& model, int which,
                                     Conditioning conditioning);

/// Sign scan of the conditional hazard of margin `which` over a 400-point log
/// grid of [1e-3, 1e3] with the other time fixed at `other_time`.
ShapeScanReport hazard_shape_region_check(const BivariateModel& model, int which,
                                          Conditioning conditioning, double other_time);

}  // namespace pgw
