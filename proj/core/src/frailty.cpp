#include "pgw/frailty.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "pgw/errors.hpp"
#include "pgw/univariate.hpp"

namespace pgw {

void TsParams::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("TsParams: omega must lie in [0, 1]");
  if (!(std::isfinite(xi) && xi > 0.0)) throw DomainError("TsParams: xi must be positive");
  if (!(std::isfinite(theta) && theta >= 0.0))
    throw DomainError("TsParams: theta must be >= 0");
  if (omega == 0.0 && theta == 0.0)
    throw DomainError("TsParams: the gamma limit needs theta > 0");
}

double ts_laplace(double s, const TsParams& p) {
  p.validate();
  if (!(s >= 0.0)) throw DomainError("ts_laplace: s must be >= 0");
  if (p.omega == 0.0) return std::exp(-p.xi * std::log1p(s / p.theta));
  if (p.theta == 0.0) return std::exp(-p.xi / p.omega * std::pow(s, p.omega));
  // theta^omega {(1 + s/theta)^omega - 1} without cancellation.
  const double growth = std::pow(p.theta, p.omega) * std::expm1(p.omega * std::log1p(s / p.theta));
  return std::exp(-p.xi / p.omega * growth);
}

double positive_stable_draw(double omega, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::exponential_distribution<double> expo(1.0);
  double u = angle(rng);
  while (u == 0.0) u = angle(rng);
  const double e = expo(rng);
  // Kanter's representation.
  const double a = std::pow(std::sin(omega * u) / std::sin(u), 1.0 / omega);
  const double b =
      std::pow(std::sin((1.0 - omega) * u) / (std::sin(omega * u) * e), (1.0 - omega) / omega);
  return a * b;
}

double ts_draw(const TsParams& p, std::mt19937_64& rng) {
  if (p.omega == 1.0) return p.xi;
  if (p.omega == 0.0) {
    std::gamma_distribution<double> g(p.xi, 1.0 / p.theta);
    return g(rng);
  }
  // Laplace exponent c {(theta+s)^omega - theta^omega}, c = xi/omega. The sum of
  // `pieces` independent copies with c/pieces keeps each acceptance rate
  // exp(-c theta^omega / pieces) above exp(-1).
  const double c = p.xi / p.omega;
  const double mass = c * std::pow(p.theta, p.omega);
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(mass)));
  const double scale = std::pow(c / static_cast<double>(pieces), 1.0 / p.omega);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double total = 0.0;
  for (std::size_t k = 0; k < pieces; ++k) {
    for (;;) {
      const double x = scale * positive_stable_draw(p.omega, rng);
      if (p.theta == 0.0 || unif(rng) <= std::exp(-p.theta * x)) {
        total += x;
        break;
      }
    }
  }
  return total;
}

std::vector<double> ts_sample(const TsParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& b : out) b = ts_draw(p, rng);
  return out;
}

std::vector<double> inverse_gaussian_sample(double mu, double shape, std::size_t n,
                                            std::uint64_t seed) {
  if (!(mu > 0.0 && shape > 0.0 && std::isfinite(mu) && std::isfinite(shape)))
    throw DomainError("inverse_gaussian_sample: mu and shape must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) {
    // Michael, Schucany and Haas.
    const double nu = normal(rng);
    const double y = nu * nu;
    const double root = std::sqrt(4.0 * mu * shape * y + mu * mu * y * y);
    const double cand = mu + mu * mu * y / (2.0 * shape) - mu / (2.0 * shape) * root;
    x = unif(rng) <= mu / (mu + cand) ? cand : mu * mu / cand;
  }
  return out;
}

namespace {

constexpr std::size_t kGridPoints = 50;

void check_shape(double gamma, double kappa) {
  if (!(gamma > 0.0 && kappa > 0.0 && std::isfinite(gamma) && std::isfinite(kappa)))
    throw DomainError("verification: gamma and kappa must be finite and positive");
}

void check_size(std::size_t n) {
  if (n < 2) throw DomainError("verification: n must be at least 2");
}

// Sup-norm comparison on a log grid between the 0.99 and 0.01 target quantiles.
VerificationReport compare(std::vector<double> draws,
                           const std::function<double(double)>& target_survival,
                           const std::function<double(double)>& target_quantile) {
  std::sort(draws.begin(), draws.end());
  VerificationReport report;
  report.n = draws.size();
  report.ks_band_95 = 1.36 / std::sqrt(static_cast<double>(draws.size()));
  const double lo = std::log(target_quantile(0.99));
  const double hi = std::log(target_quantile(0.01));
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    const double t = std::exp(lo + (hi - lo) * static_cast<double>(i) / (kGridPoints - 1));
    const auto above = draws.end() - std::upper_bound(draws.begin(), draws.end(), t);
    const double empirical = static_cast<double>(above) / static_cast<double>(draws.size());
    const double target = target_survival(t);
    report.grid.push_back(t);
    report.empirical.push_back(empirical);
    report.target.push_back(target);
    report.max_abs_dev = std::max(report.max_abs_dev, std::abs(empirical - target));
  }
  return report;
}

}  // namespace

VerificationReport verify_result1(double gamma, double kappa, double omega, double lambda,
                                  std::size_t n, std::uint64_t seed, MixingLaw law) {
  check_shape(gamma, kappa);
  check_size(n);
  if (!(lambda > 0.0 && std::isfinite(lambda)))
    throw DomainError("verify_result1: lambda must be positive");

  std::vector<double> frailty;
  if (law == MixingLaw::kInverseGaussian) {
    if (omega != 0.5) throw DomainError("verify_result1: inverse Gaussian mixing needs omega = 1/2");
    // TS(1/2, lambda/2, 1) is IG with mean lambda/2 and shape lambda^2/2.
    frailty = inverse_gaussian_sample(lambda / 2.0, lambda * lambda / 2.0, n, seed);
  } else if (omega == 0.0) {
    frailty = ts_sample(TsParams{0.0, lambda, 1.0}, n, seed);
  } else {
    frailty = ts_sample(TsParams{omega, omega * lambda, 1.0}, n, seed);
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draws(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = expo(rng) / frailty[i];
    draws[i] = std::pow(std::expm1(std::log1p(y) / kappa), 1.0 / gamma);
  }

  if (omega == 0.0 && law == MixingLaw::kTemperedStable) {
    const double rate = lambda * kappa;
    auto survival = [=](double t) { return std::exp(-rate * std::log1p(std::pow(t, gamma))); };
    auto quantile = [=](double u) { return std::pow(std::expm1(-std::log(u) / rate), 1.0 / gamma); };
    return compare(std::move(draws), survival, quantile);
  }
  const PgwParams target{gamma, omega * kappa, lambda, 1.0};
  return compare(
      std::move(draws), [&](double t) { return survival_pgw(t, target); },
      [&](double u) { return quantile_pgw(u, target); });
}

VerificationReport verify_resultA1(double gamma, double kappa, double omega, std::size_t n,
                                   std::uint64_t seed) {
  check_shape(gamma, kappa);
  check_size(n);
  if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("verify_resultA1: omega must lie in (0, 1]");

  const TsParams law{omega,
                     std::pow(kappa, omega - 1.0) * (omega * kappa + 1.0) /
                         std::pow(kappa + 1.0, omega),
                     (kappa + 1.0) / kappa};
  const std::vector<double> frailty = ts_sample(law, n, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draws(n);
  for (std::size_t i = 0; i < n; ++i)
    draws[i] = inverse_unit_chf_apgw(expo(rng) / frailty[i], gamma, kappa);

  const double a = std::pow((kappa + 1.0) / (omega * kappa + 1.0), 1.0 / gamma);
  const ApgwParams target{gamma, omega * kappa, 1.0, 1.0 / a};
  return compare(
      std::move(draws), [&](double t) { return survival_apgw(t, target); },
      [&](double u) { return quantile_apgw(u, target); });
}

VerificationReport verify_weibull_extension_link(double gamma, std::size_t n,
                                                 std::uint64_t seed) {
  check_shape(gamma, 1.0);
  check_size(n);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draws(n);
  for (auto& t : draws) {
    const double b = expo(rng);
    t = std::pow(std::log1p(expo(rng) / b), 1.0 / gamma);
  }
  const PgwParams weibull{gamma, 1.0, 1.0, 1.0};
  return compare(
      std::move(draws), [&](double t) { return survival_pgw(t, weibull); },
      [&](double u) { return quantile_pgw(u, weibull); });
}

}  // namespace pgw
