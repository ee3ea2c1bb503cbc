#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pgw {

/// Tempered-stable (power variance) law with Laplace transform
/// exp[-(xi/omega) {(theta + s)^omega - theta^omega}].
///
/// omega = 0 encodes the gamma limit (shape xi, rate theta); omega = 1 is the
/// point mass at xi. The density has no closed form and is not offered.
struct TsParams {
  double omega = 0.5;
  double xi = 1.0;
  double theta = 1.0;

  void validate() const;
};

double ts_laplace(double s, const TsParams& p);

/// i.i.d. draws; deterministic for a fixed seed.
std::vector<double> ts_sample(const TsParams& p, std::size_t n, std::uint64_t seed);

/// One draw from an existing stream.
double ts_draw(const TsParams& p, std::mt19937_64& rng);

/// Positive omega-stable variate with Laplace transform exp(-s^omega), 0 < omega < 1.
double positive_stable_draw(double omega, std::mt19937_64& rng);

/// Inverse Gaussian with mean mu and shape parameter `shape`.
std::vector<double> inverse_gaussian_sample(double mu, double shape, std::size_t n,
                                            std::uint64_t seed);

/// Source of the frailty in verify_result1.
enum class MixingLaw {
  kTemperedStable,   // B ~ TS(omega, omega * lambda, 1)
  kInverseGaussian,  // B ~ IG(lambda/2, lambda^2/2); requires omega = 1/2
};

struct VerificationReport {
  double max_abs_dev = 0.0;   // sup over the grid of |empirical S - target S|
  double ks_band_95 = 0.0;    // 1.36 / sqrt(n)
  std::size_t n = 0;
  std::vector<double> grid;
  std::vector<double> empirical;
  std::vector<double> target;
};

/// Mixes T | B ~ PGW(gamma, kappa, B) over the frailty and compares with
/// PGW(gamma, omega * kappa, lambda). omega = 0 mixes over gamma(shape lambda)
/// and compares with the Burr law of c.h.f. lambda * kappa * log(1 + t^gamma).
VerificationReport verify_result1(double gamma, double kappa, double omega, double lambda,
                                  std::size_t n, std::uint64_t seed,
                                  MixingLaw law = MixingLaw::kTemperedStable);

/// Mixes T | B ~ APGW(gamma, kappa, B) over
/// B ~ TS(omega, kappa^(omega-1) (omega kappa + 1) / (kappa + 1)^omega, (kappa + 1) / kappa)
/// and compares with S(t) = exp[-H_A((t/a)^gamma; omega kappa)],
/// a = {(kappa + 1) / (omega kappa + 1)}^(1/gamma).
VerificationReport verify_resultA1(double gamma, double kappa, double omega, std::size_t n,
                                   std::uint64_t seed);

/// T | B with c.h.f. B (exp(t^gamma) - 1), B ~ Exp(1), against exp(-t^gamma).
VerificationReport verify_weibull_extension_link(double gamma, std::size_t n,
                                                 std::uint64_t seed);

}  // namespace pgw
