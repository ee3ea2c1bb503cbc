#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include <pgw/errors.hpp>
#include <pgw/univariate.hpp>

#include "oracles.hpp"

using namespace pgw;

TEST_CASE("PGW cumulative hazard values") {
  CHECK(chf_pgw(2.0, {1.0, 1.0, 1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chf_pgw(0.0, {2.3, 0.4, 1.7, 0.8}) == 0.0);
  CHECK(chf_pgw(1.5, {2.0, 0.5, 1.0, 1.0}) == doctest::Approx(std::sqrt(3.25) - 1.0).epsilon(1e-14));
  CHECK_THROWS_AS(chf_pgw(-1.0, {}), DomainError);
  CHECK_THROWS_AS(chf_pgw(1.0, {1.0, 0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("APGW cumulative hazard and its limits") {
  for (double t : {0.1, 0.9, 2.5}) {
    CHECK(chf_apgw(t, {1.7, 1.0, 2.0, 1.0}) == doctest::Approx(2.0 * std::pow(t, 1.7)).epsilon(1e-13));
  }
  CHECK(chf_apgw(1.0, {1.0, 0.0, 1.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(chf_apgw(1.0, {1.0, 1e-8, 1.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(chf_apgw(1.0, {1.0, kInfinity, 1.0, 1.0}) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(chf_apgw(1.0, {1.0, 1e8, 1.0, 1.0}) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-7));
  CHECK_THROWS_AS(chf_apgw(1.0, {1.0, -1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(chf_apgw(-0.5, {}), DomainError);
}

TEST_CASE("APGW limit continuity at the switch thresholds") {
  for (double t = 0.01; t < 2.0; t *= 1.5) {
    const double burr = std::log1p(std::pow(t, 1.3));
    const double we = std::expm1(std::pow(t, 1.3));
    CHECK(std::abs(chf_apgw(t, {1.3, 1e-6, 1.0, 1.0}) - burr) < 1e-5);
    CHECK(std::abs(chf_apgw(t, {1.3, -1e-6, 1.0, 1.0}) - burr) < 1e-5);
    CHECK(std::abs(chf_apgw(t, {1.3, 1e6, 1.0, 1.0}) - we) < 1e-4);
  }
}

TEST_CASE("APGW survival, hazard and cure fraction") {
  CHECK(survival_apgw(0.0, {0.7, 2.0, 3.0, 1.5}) == 1.0);
  for (double t : {0.01, 1.0, 50.0}) CHECK(hazard_apgw(t, {1.0, 1.0, 1.0, 1.0}) == doctest::Approx(1.0));
  const ApgwParams cure{1.0, -0.5, 1.0, 1.0};
  CHECK(cure.is_cure_model());
  CHECK(std::abs(survival_apgw(1e12, cure) - std::exp(-1.0)) < 1e-6);
  CHECK(cure_fraction(cure) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(cure_fraction({1.0, 0.5, 1.0, 1.0}) == 0.0);
}

TEST_CASE("quantile inversion round trips") {
  CHECK(quantile_apgw(std::exp(-1.0), {1.0, 1.0, 1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quantile_apgw(1.0 - 1e-15, {1.4, 0.3, 1.0, 1.0}) < 1e-9);
  oracle::Draw draw(3);
  for (int i = 0; i < 300; ++i) {
    const double tau_choices[] = {-0.6, 0.0, 0.15, 1.0, 4.0, kInfinity};
    const ApgwParams p{draw.log_uniform(0.3, 4.0), tau_choices[i % 6], draw.log_uniform(0.05, 3.0),
                       draw.log_uniform(0.2, 5.0)};
    const double floor = cure_fraction(p);
    const double u = floor + (1.0 - floor) * draw.uniform(0.02, 0.98);
    CAPTURE(p.tau);
    CHECK(std::abs(survival_apgw(quantile_apgw(u, p), p) - u) < 1e-12);
  }
  const ApgwParams cure{1.0, -0.5, 1.0, 1.0};
  CHECK_THROWS_AS(quantile_apgw(0.3, cure), NoSolutionError);
  CHECK_THROWS_AS(quantile_apgw(0.0, {}), DomainError);
  CHECK_THROWS_AS(quantile_apgw(1.0, {}), DomainError);
  const PgwParams pg{1.3, 0.7, 0.4, 2.0};
  CHECK(survival_pgw(quantile_pgw(0.37, pg), pg) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("median ratio across horizontal scales is the scale ratio") {
  const double g = std::exp(1.52);
  const double lambda = std::exp(-5.57);
  const double m1 = quantile_apgw(0.5, {g, 0.15, lambda, std::exp(-0.07)});
  const double m2 = quantile_apgw(0.5, {g, 0.15, lambda, std::exp(0.98)});
  CHECK(std::abs(m1 / m2 - 2.84) < 0.05);
}

TEST_CASE("hazard shape labels") {
  CHECK(classify_hazard_shape(1.0, 1.0) == HazardShape::kConstant);
  CHECK(classify_hazard_shape(2.0, 0.25) == HazardShape::kUpThenDown);
  CHECK(classify_hazard_shape(0.5, 4.0) == HazardShape::kDownThenUp);
  CHECK(classify_hazard_shape(0.5, 1.0) == HazardShape::kDecreasing);
  CHECK(classify_hazard_shape(2.0, 1.0) == HazardShape::kIncreasing);
  // Boundary ties go to the monotone labels.
  CHECK(classify_hazard_shape(1.0, 0.5) == HazardShape::kDecreasing);
  CHECK(classify_hazard_shape(2.0, 0.5) == HazardShape::kIncreasing);
  CHECK(to_string(HazardShape::kUpThenDown) == "up-then-down");
}

TEST_CASE("random draws: c.h.f. monotone, zero at the origin, density mass matches the cure fraction") {
  oracle::Draw draw(17);
  boost::math::quadrature::exp_sinh<double> integrator;
  for (int i = 0; i < 200; ++i) {
    const ApgwParams p{draw.uniform(0.6, 3.0), draw.uniform(-0.8, 5.0), draw.uniform(0.2, 3.0),
                       draw.uniform(0.5, 2.0)};
    CAPTURE(p.gamma);
    CAPTURE(p.tau);
    CHECK(chf_apgw(0.0, p) == 0.0);
    double prev = 0.0;
    for (double t = 1e-3; t < 1e3; t *= 1.3) {
      const double h = chf_apgw(t, p);
      CHECK(h >= prev);
      prev = h;
    }
    const double mass =
        integrator.integrate([&](double t) { return density_apgw(t, p); }, 0.0, kInfinity);
    CHECK(std::abs(mass - (1.0 - cure_fraction(p))) < 1e-5);
  }
}

TEST_CASE("APGW is a rescaled PGW c.h.f.") {
  oracle::Draw draw(5);
  for (int i = 0; i < 100; ++i) {
    const double g = draw.uniform(0.3, 3.0);
    const double tau = draw.log_uniform(0.05, 20.0);
    const double t = draw.log_uniform(0.01, 5.0);
    const double lhs = chf_apgw(t, {g, tau, 1.0, 1.0});
    const double rhs =
        (tau + 1.0) / tau * chf_pgw(t / std::pow(tau + 1.0, 1.0 / g), {g, tau, 1.0, 1.0});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    // And the time map carries PGW survival onto APGW survival.
    CHECK(survival_apgw(pgw_to_apgw_time(t, g, tau), {g, tau, 1.0, 1.0}) ==
          doctest::Approx(survival_pgw(t, {g, tau, 1.0, 1.0})).epsilon(1e-9));
  }
}

TEST_CASE("hazard shape label agrees with a sign scan of the hazard") {
  oracle::Draw draw(23);
  int scanned = 0;
  while (scanned < 100) {
    const double g = draw.log_uniform(0.3, 4.0);
    const double k = draw.log_uniform(0.2, 5.0);
    if (std::abs(std::log(g)) < 0.1 || std::abs(std::log(g * k)) < 0.1) continue;
    // The turning point, if any, solves x / (1 + x) = (1 - g) / (g (k - 1)) with x = t^g.
    const double r = (1.0 - g) / (g * (k - 1.0));
    if (r > 0.0 && r < 1.0) {
      const double t_star = std::pow(r / (1.0 - r), 1.0 / g);
      if (t_star < 1e-2 || t_star > 1e2) continue;
    }
    ++scanned;
    int runs = 0, last = 0, first = 0;
    double prev = std::log(hazard_apgw(1e-3, {g, k, 1.0, 1.0}));
    for (int j = 1; j < 400; ++j) {
      const double t = std::exp(std::log(1e-3) + j * std::log(1e6) / 399.0);
      const double cur = std::log(hazard_apgw(t, {g, k, 1.0, 1.0}));
      const int s = cur > prev ? 1 : (cur < prev ? -1 : 0);
      prev = cur;
      if (s == 0 || s == last) continue;
      if (runs == 0) first = s;
      ++runs;
      last = s;
    }
    HazardShape observed = HazardShape::kConstant;
    if (runs == 1) observed = first > 0 ? HazardShape::kIncreasing : HazardShape::kDecreasing;
    if (runs == 2) observed = first > 0 ? HazardShape::kUpThenDown : HazardShape::kDownThenUp;
    CAPTURE(g);
    CAPTURE(k);
    CHECK(observed == classify_hazard_shape(g, k));
  }
}
