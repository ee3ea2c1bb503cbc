#include "pgw/bivariate.hpp"

#include <cmath>
#include <vector>

#include "pgw/errors.hpp"

namespace pgw {

std::string_view to_string(Family family) {
  return family == Family::kPgw ? "pgw" : "apgw";
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::kIncreasing: return "increasing";
    case Monotonicity::kDecreasing: return "decreasing";
    case Monotonicity::kNone: break;
  }
  return "none";
}

void BivariateModel::validate() const {
  copula().validate();
  for (int which : {1, 2}) {
    if (family == Family::kPgw) {
      pgw_margin(which).validate();
    } else {
      apgw_margin(which).validate();
    }
  }
}

const MarginShape& BivariateModel::margin(int which) const {
  if (which == 1) return margin1;
  if (which == 2) return margin2;
  throw DomainError("margin index must be 1 or 2");
}

ApgwParams BivariateModel::apgw_margin(int which) const {
  const MarginShape& m = margin(which);
  return {m.gamma, m.tau, lambda, m.phi};
}

PgwParams BivariateModel::pgw_margin(int which) const {
  const MarginShape& m = margin(which);
  return {m.gamma, m.tau, lambda, m.phi};
}

BivariateModel BivariateModel::swapped() const {
  BivariateModel out = *this;
  std::swap(out.margin1, out.margin2);
  return out;
}

UnitChf margin_chf(double t, const MarginShape& m, Family family) {
  return family == Family::kPgw ? pgw_unit_chf(t, m.gamma, m.tau, m.phi)
                                 : apgw_unit_chf(t, m.gamma, m.tau, m.phi);
}

double margin_survival(double t, const BivariateModel& model, int which) {
  return model.family == Family::kPgw ? survival_pgw(t, model.pgw_margin(which))
                                      : survival_apgw(t, model.apgw_margin(which));
}

double margin_hazard(double t, const BivariateModel& model, int which) {
  return model.family == Family::kPgw ? hazard_pgw(t, model.pgw_margin(which))
                                      : hazard_apgw(t, model.apgw_margin(which));
}

double margin_quantile(double u, const BivariateModel& model, int which) {
  return model.family == Family::kPgw ? quantile_pgw(u, model.pgw_margin(which))
                                      : quantile_apgw(u, model.apgw_margin(which));
}

namespace {

struct MarginTerms {
  double log_r = 0.0;       // log(1 + H)
  double log_dr = 0.0;      // log H'
  double d2r = 0.0;         // H''
};

MarginTerms margin_terms(double t, const MarginShape& m, Family family) {
  const UnitChf c = margin_chf(t, m, family);
  return {c.log1p_value, c.log_derivative, c.second_derivative};
}

double log_l10_of(const MarginTerms& m, double omega) {
  return -std::log(omega) + (1.0 / omega - 1.0) * m.log_r + m.log_dr;
}

double l20_of(const MarginTerms& m, double omega) {
  const double k = 1.0 / omega;
  return k * std::exp((k - 1.0) * m.log_r) *
         ((k - 1.0) * std::exp(2.0 * m.log_dr - m.log_r) + m.d2r);
}

// log(lambda omega L^omega + 1 - omega).
double log_density_factor(double log_l, double omega, double lambda) {
  const double e = omega * log_l + std::log(lambda * omega);
  if (omega == 1.0) return e;
  if (e > 700.0) return e + std::log1p((1.0 - omega) * std::exp(-e));
  return std::log(std::exp(e) + 1.0 - omega);
}

void check_times(double t1, double t2) {
  if (!(t1 >= 0.0) || !(t2 >= 0.0)) throw DomainError("times must be >= 0");
}

}  // namespace

LValue l_value(double t1, double t2, const BivariateModel& model) {
  model.validate();
  check_times(t1, t2);
  const double w = model.omega;
  const MarginTerms a = margin_terms(t1, model.margin1, model.family);
  const MarginTerms b = margin_terms(t2, model.margin2, model.family);
  LValue out;
  out.log_l = log_sum_exp_minus_one(a.log_r / w, b.log_r / w);
  out.l = std::exp(out.log_l);
  out.log_l10 = log_l10_of(a, w);
  out.log_l01 = log_l10_of(b, w);
  out.l10 = std::exp(out.log_l10);
  out.l01 = std::exp(out.log_l01);
  out.l20 = l20_of(a, w);
  out.l02 = l20_of(b, w);
  return out;
}

double joint_survival(double t1, double t2, const BivariateModel& model) {
  return survival_partials(t1, t2, model).s;
}

SurvivalPartials survival_partials(double t1, double t2, const BivariateModel& model) {
  const LValue l = l_value(t1, t2, model);
  const double w = model.omega;
  const double lam = model.lambda;
  SurvivalPartials out;
  out.log_s = -lam * std::expm1(w * l.log_l);
  const double base = std::log(lam * w) + out.log_s + (w - 1.0) * l.log_l;
  out.log_neg_ds_dt1 = base + l.log_l10;
  out.log_neg_ds_dt2 = base + l.log_l01;
  out.log_d2s = base - l.log_l + l.log_l10 + l.log_l01 + log_density_factor(l.log_l, w, lam);
  out.s = std::exp(out.log_s);
  out.ds_dt1 = -std::exp(out.log_neg_ds_dt1);
  out.ds_dt2 = -std::exp(out.log_neg_ds_dt2);
  out.d2s = std::exp(out.log_d2s);
  return out;
}

double log_contribution(double t1, bool event1, double t2, bool event2,
                        const BivariateModel& model) {
  const SurvivalPartials p = survival_partials(t1, t2, model);
  if (event1 && event2) return p.log_d2s;
  if (event1) return p.log_neg_ds_dt1;
  if (event2) return p.log_neg_ds_dt2;
  return p.log_s;
}

namespace {

double log_cond_hazard_ge(double t1, double t2, const BivariateModel& model) {
  const LValue l = l_value(t1, t2, model);
  return std::log(model.lambda * model.omega) + (model.omega - 1.0) * l.log_l + l.log_l10;
}

double log_cond_hazard_eq(double t1, double t2, const BivariateModel& model) {
  const LValue l = l_value(t1, t2, model);
  return l.log_l10 - l.log_l + log_density_factor(l.log_l, model.omega, model.lambda);
}

void check_positive_time(double t1) {
  if (!(t1 > 0.0)) throw DomainError("conditional hazards need t1 > 0");
}

}  // namespace

double cond_hazard_ge(double t1, double t2, const BivariateModel& model) {
  check_positive_time(t1);
  return std::exp(log_cond_hazard_ge(t1, t2, model));
}

double cond_hazard_eq(double t1, double t2, const BivariateModel& model) {
  check_positive_time(t1);
  return std::exp(log_cond_hazard_eq(t1, t2, model));
}

double cross_ratio(double t1, double t2, const BivariateModel& model) {
  const LValue l = l_value(t1, t2, model);
  const double w = model.omega;
  return 1.0 + (1.0 - w) / (model.lambda * w) * std::exp(-w * l.log_l);
}

Monotonicity guaranteed_monotonicity(const BivariateModel& model, int which,
                                     Conditioning conditioning) {
  model.validate();
  const MarginShape& m = model.margin(which);
  const double g = m.gamma;
  const double tau = m.tau;
  const double w = model.omega;
  if (conditioning == Conditioning::kAtLeast && g >= 1.0 && tau > 0.0 && g * tau >= 1.0)
    return Monotonicity::kIncreasing;
  if (g > 1.0) return Monotonicity::kNone;
  if (model.family == Family::kPgw) {
    return g * tau <= w ? Monotonicity::kDecreasing : Monotonicity::kNone;
  }
  const double denom = 1.0 - w + tau;
  if (std::isinf(tau) || !(denom > 0.0)) return Monotonicity::kNone;
  return g <= w / denom ? Monotonicity::kDecreasing : Monotonicity::kNone;
}

ShapeScanReport hazard_shape_region_check(const BivariateModel& model, int which,
                                          Conditioning conditioning, double other_time) {
  const BivariateModel oriented = which == 2 ? model.swapped() : model;
  model.margin(which);
  if (!(other_time >= 0.0)) throw DomainError("other_time must be >= 0");

  ShapeScanReport report;
  report.guaranteed = guaranteed_monotonicity(model, which, conditioning);

  constexpr int kPoints = 400;
  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);
  std::vector<double> log_h;
  log_h.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const double v = conditioning == Conditioning::kAtLeast
                         ? log_cond_hazard_ge(t, other_time, oriented)
                         : log_cond_hazard_eq(t, other_time, oriented);
    if (!std::isfinite(v)) break;
    log_h.push_back(v);
  }

  report.points = static_cast<int>(log_h.size());
  std::vector<int> runs;  // signs of successive monotone runs
  for (std::size_t i = 1; i < log_h.size(); ++i) {
    const double d = log_h[i] - log_h[i - 1];
    const double tol = 1e-10 * std::max(1.0, std::abs(log_h[i]));
    const int sign = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (report.guaranteed == Monotonicity::kIncreasing && sign < 0) ++report.violations;
    if (report.guaranteed == Monotonicity::kDecreasing && sign > 0) ++report.violations;
    if (runs.empty() || runs.back() != sign) runs.push_back(sign);
  }

  if (runs.empty()) {
    report.observed = "constant";
  } else if (runs.size() == 1) {
    report.observed = runs[0] > 0 ? "increasing" : "decreasing";
  } else if (runs.size() == 2) {
    report.observed = runs[0] > 0 ? "up-then-down" : "down-then-up";
  } else {
    report.observed = "multimodal";
  }
  report.confirmed = report.violations == 0;
  return report;
}

}  // namespace pgw
