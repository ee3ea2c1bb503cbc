#include <cmath>
#include <sstream>

#include <doctest.h>

#include <pgw/curves.hpp>
#include <pgw/data.hpp>
#include <pgw/errors.hpp>
#include <pgw/simulate.hpp>

#include "oracles.hpp"

using namespace pgw;

namespace {

PairedData parse(const std::string& text, Layout layout) {
  std::istringstream in(text);
  return read_paired_csv(in, layout);
}

std::string error_of(const std::string& text, Layout layout) {
  try {
    parse(text, layout);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("retinopathy data loads as 197 pairs") {
  const PairedData d = oracle::retinopathy();
  CHECK(d.size() == 197);
  CHECK(d.covariate_names == std::vector<std::string>{"D"});
  int events = 0;
  for (const PairedRecord& r : d.records) events += r.d1 + r.d2;
  CHECK(events == 155);
}

TEST_CASE("wide to long to wide is the identity") {
  const PairedData d = oracle::retinopathy();
  std::ostringstream lng;
  write_long_csv(lng, d);
  const PairedData back = parse(lng.str(), Layout::kLong);
  std::ostringstream w1, w2;
  write_wide_csv(w1, d);
  write_wide_csv(w2, back);
  CHECK(w1.str() == w2.str());
  const PairedData again = parse(w2.str(), Layout::kWide);
  REQUIRE(again.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(again.records[i].id == d.records[i].id);
    CHECK(again.records[i].t1 == d.records[i].t1);
    CHECK(again.records[i].d2 == d.records[i].d2);
    CHECK(again.records[i].covariates == d.records[i].covariates);
  }
}

TEST_CASE("custom column names") {
  std::istringstream in("subject,a,da,b,db,x\n1,2,1,3,0,0.5\n");
  ColumnMap map;
  map.id = "subject";
  map.t1 = "a";
  map.d1 = "da";
  map.t2 = "b";
  map.d2 = "db";
  const PairedData d = read_paired_csv(in, Layout::kWide, map);
  CHECK(d.records[0].t2 == 3.0);
  CHECK(d.covariate_names == std::vector<std::string>{"x"});
}

TEST_CASE("malformed input is rejected with positions") {
  CHECK(error_of("id,t1,d1,t2,d2\n1,-2,1,3,0\n", Layout::kWide).find("line 2") != std::string::npos);
  CHECK(error_of("id,t1,d1,t2,d2\n1,2,1,3,0\n2,2,7,3,0\n", Layout::kWide).find("line 3") != std::string::npos);
  CHECK(error_of("id,t1,d1,t2\n1,2,1,3\n", Layout::kWide).find("d2") != std::string::npos);
  CHECK(error_of("id,t1,d1,t2,d2\n1,2,1,abc,0\n", Layout::kWide) != "");
  CHECK(error_of("id,role,time,status\n1,1,2,1\n", Layout::kLong) != "");
  CHECK(error_of("id,role,time,status\n1,1,2,1\n1,1,3,0\n", Layout::kLong) != "");
  CHECK(error_of("id,role,time,status,D\n1,1,2,1,0\n1,2,3,0,1\n", Layout::kLong) != "");
  CHECK(error_of("", Layout::kWide) != "");
  CHECK_THROWS_AS(load_paired_csv("/nonexistent/file.csv", Layout::kWide), InputError);
}

TEST_CASE("Kaplan-Meier without censoring is the empirical survival") {
  const std::vector<double> t = {3, 1, 4, 1, 5, 9, 2, 6};
  const KmCurve km = kaplan_meier(t, std::vector<bool>(t.size(), true));
  for (double x : {0.5, 1.0, 1.5, 2.0, 3.5, 6.0, 8.0, 9.0, 10.0}) {
    double above = 0;
    for (double v : t) above += v > x;
    CHECK(km.at(x) == doctest::Approx(above / t.size()).epsilon(1e-15));
  }
  CHECK(km.at_risk.front() == 8);
  CHECK(km.events.front() == 2);
}

TEST_CASE("Kaplan-Meier with censoring") {
  // Hand-computed product limit: S(2) = 4/5, S(4) = 4/5 * 2/3.
  const KmCurve km = kaplan_meier({2, 3, 4, 5, 6}, {true, false, true, false, false});
  CHECK(km.times == std::vector<double>{2, 4});
  CHECK(km.survival[1] == doctest::Approx(0.8 * 2.0 / 3.0));
  CHECK(km.at(0.0) == 1.0);
  CHECK_THROWS_AS(kaplan_meier({}, {}), InputError);
}

TEST_CASE("fitted curves") {
  const PairedData d = oracle::retinopathy();
  FitResult f;
  f.spec.common_gamma = f.spec.common_tau = true;
  f.covariate_names = d.covariate_names;
  f.names = f.spec.parameter_names();
  f.theta.resize(6);
  f.theta << -5.57, 1.52, -0.07, 1.52, 0.14, 0.98;
  const std::vector<double> grid = {0.0, 5.0, 20.0, 60.0};
  const auto pts = export_fitted_curves(f, d, grid);
  int zero_rows = 0;
  for (const CurvePoint& p : pts) {
    if (p.time == 0.0) {
      ++zero_rows;
      CHECK(p.survival == 1.0);
    }
    if (p.source == "model" && p.time > 0.0) {
      const BivariateModel m = f.model_at({p.group == "D=1" ? 1.0 : 0.0});
      CHECK(std::abs(p.survival - survival_apgw(p.time, m.apgw_margin(p.arm))) < 1e-12);
    }
  }
  CHECK(zero_rows == 8);  // model and KM, two arms, two levels
  const BivariateModel m = f.model_at({0.0});
  const double ratio = quantile_apgw(0.5, m.apgw_margin(1)) / quantile_apgw(0.5, m.apgw_margin(2));
  CHECK(std::abs(ratio - 2.84) < 0.05);
  std::ostringstream os;
  write_curves_csv(os, pts);
  CHECK(os.str().rfind("source,arm,group,time,survival\n", 0) == 0);
}

TEST_CASE("simulation is deterministic and hits the censoring rate") {
  BivariateModel m;
  m.lambda = 0.5;
  m.omega = 0.6;
  m.margin1 = {1.3, 0.5, 1.0};
  m.margin2 = {0.9, 2.0, 0.5};
  const PairedData a = simulate_dataset(m, 4000, 0.3, 21);
  const PairedData b = simulate_dataset(m, 4000, 0.3, 21);
  CHECK(a.records[17].t1 == b.records[17].t1);
  double c1 = 0, c2 = 0;
  for (const PairedRecord& r : a.records) {
    c1 += !r.d1;
    c2 += !r.d2;
  }
  CHECK(std::abs(c1 / 4000 - 0.3) < 0.03);
  CHECK(std::abs(c2 / 4000 - 0.3) < 0.03);
  CHECK(std::isinf(censoring_limit(m, 1, 0.0)));

  // Uncensored pairs reproduce the copula's Kendall tau.
  const auto z = simulate_latent(m, 3000, 5);
  long long conc = 0, disc = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double s = (z[i].t1 - z[j].t1) * (z[i].t2 - z[j].t2);
      conc += s > 0;
      disc += s < 0;
    }
  const double tau_hat = double(conc - disc) / double(conc + disc);
  CHECK(std::abs(tau_hat - kendall_tau(m.copula())) < 0.03);
}

TEST_CASE("simulated cure-model subjects are censored") {
  BivariateModel m;
  m.lambda = 1.0;
  m.omega = 0.8;
  m.margin1 = {1.0, -0.5, 1.0};
  m.margin2 = {1.0, 1.0, 1.0};
  const auto z = simulate_latent(m, 20000, 2);
  double cured = 0;
  for (const auto& p : z) cured += std::isinf(p.t1);
  CHECK(std::abs(cured / 20000 - std::exp(-1.0)) < 0.015);
  for (const PairedRecord& r : simulate_dataset(m, 500, 0.5, 3).records) CHECK(std::isfinite(r.t1));
}
