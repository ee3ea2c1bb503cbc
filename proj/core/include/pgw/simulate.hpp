#pragma once

#include <cstdint>

#include "pgw/bivariate.hpp"
#include "pgw/data.hpp"

namespace pgw {

/// Upper limit c of uniform(0, c) censoring that censors a fraction `rate`
/// of margin `which`, i.e. (1/c) int_0^c S(t) dt = rate. Infinity for rate 0.
double censoring_limit(const BivariateModel& model, int which, double rate);

/// Paired draws from the shared-frailty construction: B ~ TS(omega, omega lambda, 1),
/// E_i ~ Exp(1), and H_i(T_i) = (1 + E_i / B)^omega - 1 for each margin, which
/// gives the model's joint survival for either family. Each margin is then
/// censored independently by uniform(0, c_i) calibrated to `censor_rate`.
/// Cured subjects (APGW with tau < 0) have infinite event times and are always
/// censored.
PairedData simulate_dataset(const BivariateModel& model, std::size_t n, double censor_rate,
                            std::uint64_t seed);

/// Uncensored latent times from the same construction.
struct LatentPair {
  double t1;
  double t2;
};
std::vector<LatentPair> simulate_latent(const BivariateModel& model, std::size_t n,
                                        std::uint64_t seed);

}  // namespace pgw
