#include "pgw/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pgw/errors.hpp"
#include "pgw/frailty.hpp"
#include "pgw/numerics.hpp"

namespace pgw {

namespace {

// t with unit-lambda c.h.f. H(t) = y; infinity when y is beyond a cure limit.
double inverse_margin_chf(double y, const MarginShape& m, Family family) {
  if (family == Family::kPgw) {
    return std::pow(std::expm1(std::log1p(y) / m.tau), 1.0 / m.gamma) / m.phi;
  }
  try {
    return inverse_unit_chf_apgw(y, m.gamma, m.tau) / m.phi;
  } catch (const NoSolutionError&) {
    return kInfinity;
  }
}

double mean_survival(const BivariateModel& model, int which, double c) {
  auto s = [&](double t) { return margin_survival(t, model, which); };
  return integrate_1d(s, 0.0, c, 1e-10) / c;
}

}  // namespace

double censoring_limit(const BivariateModel& model, int which, double rate) {
  model.validate();
  if (!(rate >= 0.0 && rate < 1.0)) throw DomainError("censor rate must lie in [0, 1)");
  if (rate == 0.0) return kInfinity;
  const double floor_rate =
      model.family == Family::kApgw ? cure_fraction(model.apgw_margin(which)) : 0.0;
  if (rate <= floor_rate)
    throw DomainError("censor rate must exceed the cure fraction " + std::to_string(floor_rate));

  // mean_survival decreases in c from 1 toward the cure fraction.
  double lo = margin_quantile(0.5, model, which);
  double hi = lo;
  while (mean_survival(model, which, lo) < rate) lo /= 2.0;
  while (mean_survival(model, which, hi) > rate) hi *= 2.0;
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-12; ++i) {
    const double mid = std::sqrt(lo * hi);
    (mean_survival(model, which, mid) > rate ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

std::vector<LatentPair> simulate_latent(const BivariateModel& model, std::size_t n,
                                        std::uint64_t seed) {
  model.validate();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const TsParams frailty{model.omega, model.omega * model.lambda, 1.0};
  std::vector<LatentPair> out(n);
  for (auto& pair : out) {
    const double b = ts_draw(frailty, rng);
    const double y1 = std::expm1(model.omega * std::log1p(expo(rng) / b));
    const double y2 = std::expm1(model.omega * std::log1p(expo(rng) / b));
    pair.t1 = inverse_margin_chf(y1, model.margin1, model.family);
    pair.t2 = inverse_margin_chf(y2, model.margin2, model.family);
  }
  return out;
}

PairedData simulate_dataset(const BivariateModel& model, std::size_t n, double censor_rate,
                            std::uint64_t seed) {
  const double c1 = censoring_limit(model, 1, censor_rate);
  const double c2 = censoring_limit(model, 2, censor_rate);
  const std::vector<LatentPair> latent = simulate_latent(model, n, seed);
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  PairedData data;
  data.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PairedRecord rec;
    rec.id = std::to_string(i + 1);
    const double u1 = unif(rng);
    const double u2 = unif(rng);
    const double cens1 = std::isinf(c1) ? kInfinity : c1 * u1;
    const double cens2 = std::isinf(c2) ? kInfinity : c2 * u2;
    if (std::isinf(latent[i].t1) && std::isinf(cens1))
      throw DomainError("cured subject with no censoring: use a positive censor rate");
    if (std::isinf(latent[i].t2) && std::isinf(cens2))
      throw DomainError("cured subject with no censoring: use a positive censor rate");
    constexpr double kTiny = std::numeric_limits<double>::min();
    rec.d1 = latent[i].t1 <= cens1;
    rec.t1 = std::max(rec.d1 ? latent[i].t1 : cens1, kTiny);
    rec.d2 = latent[i].t2 <= cens2;
    rec.t2 = std::max(rec.d2 ? latent[i].t2 : cens2, kTiny);
    data.records.push_back(std::move(rec));
  }
  return data;
}

}  // namespace pgw
