#include "pgw_app/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <pgw/curves.hpp>
#include <pgw/data.hpp>
#include <pgw/errors.hpp>
#include <pgw/frailty.hpp>
#include <pgw/inference.hpp>
#include <pgw/simulate.hpp>

#include "pgw_app/presets.hpp"
#include "pgw_app/report.hpp"

namespace pgw::app {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_real(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "Inf" || text == "+inf") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InputError(what + ": cannot parse '" + text + "'");
  return v;
}

std::vector<double> parse_reals(const std::vector<std::string>& items, const std::string& what) {
  std::vector<double> out;
  for (const std::string& s : items) out.push_back(parse_real(s, what));
  return out;
}

unsigned default_threads() {
  const char* env = std::getenv(kThreadsEnv);
  if (env == nullptr || *env == '\0') return 1;
  const double v = parse_real(env, kThreadsEnv);
  if (!(v >= 1.0) || v != std::floor(v)) throw InputError(std::string(kThreadsEnv) + " must be a positive integer");
  return static_cast<unsigned>(v);
}

struct Output {
  std::string path;
  std::string format;
};

/// Writes `text` to --out or to the stream.
void emit(const Output& o, std::ostream& out, const std::string& text) {
  if (o.path.empty() || o.path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(o.path);
  if (!f) throw InputError("cannot write '" + o.path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Shared option groups

struct DataOpts {
  std::string path;
  std::string layout = "auto";
};

void add_data(CLI::App* sub, DataOpts& d, bool required = true) {
  auto* opt = sub->add_option("--data", d.path, "Paired CSV file");
  if (required) opt->required();
  sub->add_option("--layout", d.layout, "wide, long or auto (long when a 'role' column exists)")
      ->check(CLI::IsMember({"auto", "wide", "long"}));
}

PairedData load(const DataOpts& d) {
  Layout layout = Layout::kWide;
  if (d.layout == "long") {
    layout = Layout::kLong;
  } else if (d.layout == "auto") {
    std::ifstream in(d.path);
    if (!in) throw InputError("cannot open '" + d.path + "'");
    std::string header;
    std::getline(in, header);
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (!col.empty() && col.back() == '\r') col.pop_back();
      if (col == "role") layout = Layout::kLong;
    }
  }
  return load_paired_csv(d.path, layout);
}

struct SpecOpts {
  std::string preset;
  std::string config;
  std::string family;
  bool common_phi = false;
  bool common_gamma = false;
  bool common_tau = false;
  std::string fixed_tau;
  std::vector<std::string> covariates;
};

void add_spec(CLI::App* sub, SpecOpts& s) {
  sub->add_option("--preset", s.preset, "Named model structure")->check(CLI::IsMember(preset_names()));
  sub->add_option("--config", s.config, "JSON file holding a spec object (or a fit report)");
  sub->add_option("--family", s.family, "Margin family")->check(CLI::IsMember({"pgw", "apgw"}));
  sub->add_flag("--common-phi", s.common_phi, "One phi for both margins");
  sub->add_flag("--common-gamma", s.common_gamma, "One gamma for both margins");
  sub->add_flag("--common-tau", s.common_tau, "One tau for both margins");
  sub->add_option("--fixed-tau", s.fixed_tau, "Hold the common tau at this value (number or inf)");
  sub->add_option("--covariate", s.covariates, "Covariate term TARGET=COLUMN (repeatable)");
}

ModelSpec build_spec(const SpecOpts& s) {
  if (!s.preset.empty() && !s.config.empty()) throw InputError("use either --preset or --config");
  ModelSpec spec;
  if (!s.preset.empty()) spec = preset_spec(s.preset);
  if (!s.config.empty()) {
    std::ifstream in(s.config);
    if (!in) throw InputError("cannot open '" + s.config + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InputError("'" + s.config + "' is not valid JSON: " + e.what());
    }
    spec = spec_from_json(j.contains("spec") ? j.at("spec") : j);
  }
  if (!s.family.empty()) spec.family = s.family == "pgw" ? Family::kPgw : Family::kApgw;
  spec.common_phi = spec.common_phi || s.common_phi;
  spec.common_gamma = spec.common_gamma || s.common_gamma;
  spec.common_tau = spec.common_tau || s.common_tau;
  if (!s.fixed_tau.empty()) {
    spec.common_tau = true;
    spec.fixed_tau = parse_real(s.fixed_tau, "--fixed-tau");
  }
  for (const std::string& term : s.covariates) {
    const auto eq = term.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == term.size())
      throw InputError("--covariate expects TARGET=COLUMN, got '" + term + "'");
    CovariateTerm t;
    try {
      t.target = parse_target(term.substr(0, eq));
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
    t.covariate = term.substr(eq + 1);
    spec.covariate_terms.push_back(t);
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid model spec: ") + e.what());
  }
  return spec;
}

struct FitOpts {
  std::uint64_t seed = 1;
  int starts = 1;
  double spread = 1.0;
  double tol = 1e-4;
  int max_iter = 500;
  std::string hessian = "nlm";
  unsigned threads = 1;
  std::string warm_start;
};

void add_fit(CLI::App* sub, FitOpts& f) {
  sub->add_option("--seed", f.seed, "Seed for random starts");
  sub->add_option("--starts", f.starts, "Number of optimizer starts (the first is the zero vector)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--start-spread", f.spread, "Standard deviation of random start perturbations")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol", f.tol, "Gradient max-norm required for convergence")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", f.max_iter, "Newton iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--hessian", f.hessian, "Finite-difference rule for standard errors")
      ->check(CLI::IsMember({"nlm", "central"}));
  sub->add_option("--threads", f.threads, std::string("Worker threads (default from ") + kThreadsEnv + ")")
      ->check(CLI::PositiveNumber);
  sub->add_option("--warm-start", f.warm_start, "Fit report whose matching coordinates seed the first start");
}

FitOptions fit_options(const FitOpts& f, const ModelSpec& spec) {
  FitOptions o;
  o.seed = f.seed;
  o.random_starts = f.starts - 1;
  o.start_spread = f.spread;
  o.newton.gradient_tolerance = f.tol;
  o.newton.max_iterations = f.max_iter;
  o.hessian = parse_hessian_rule(f.hessian);
  o.threads = f.threads;
  if (!f.warm_start.empty()) o.starts.push_back(embed_start(load_fit_report(f.warm_start), spec));
  return o;
}

void add_output(CLI::App* sub, Output& o, const std::string& default_format,
                std::vector<std::string> formats) {
  // Output is shared by all subcommands, so the default applies only to the one parsed.
  sub->add_option("--out", o.path, "Output file (default stdout)");
  sub->add_option("--format", o.format, "Output format (default " + default_format + ")")
      ->check(CLI::IsMember(std::move(formats)));
  sub->parse_complete_callback([&o, default_format] {
    if (o.format.empty()) o.format = default_format;
  });
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands

int run_fit(const DataOpts& d, const SpecOpts& s, const FitOpts& f, const std::string& curves_path,
            int curve_points, const Output& o, std::ostream& out, std::ostream& err) {
  const PairedData data = load(d);
  const ModelSpec spec = build_spec(s);
  const FitOptions options = fit_options(f, spec);
  const FitResult result = fit(spec, data, options);
  emit(o, out, dump(fit_report(result, options.hessian)));
  if (!curves_path.empty()) {
    double t_max = 0.0;
    for (const PairedRecord& r : data.records) t_max = std::max({t_max, r.t1, r.t2});
    std::vector<double> grid;
    for (int i = 1; i <= curve_points; ++i) grid.push_back(t_max * i / curve_points);
    std::ofstream c(curves_path);
    if (!c) throw InputError("cannot write '" + curves_path + "'");
    write_curves_csv(c, export_fitted_curves(result, data, grid));
  }
  if (!result.convergence.converged) {
    err << "fit did not converge: " << result.convergence.message << '\n';
    return kExitConvergence;
  }
  return kExitOk;
}

int run_compare(const DataOpts& d, std::vector<std::string> presets, const std::string& set,
                const std::vector<std::string>& reports, const FitOpts& f, const Output& o,
                std::ostream& out, std::ostream& err) {
  if (set == "treatment") presets = treatment_presets();
  if (set == "diabetes") presets = diabetes_presets();
  if (presets.empty() && reports.empty())
    throw InputError("compare needs --presets, --set or --report");
  std::vector<FitResult> fits;
  std::vector<std::string> labels;
  if (!presets.empty()) {
    if (d.path.empty()) throw InputError("compare with presets needs --data");
    const PairedData data = load(d);
    for (const std::string& name : presets) {
      const ModelSpec spec = preset_spec(name);
      fits.push_back(fit(spec, data, fit_options(f, spec)));
      labels.push_back(name);
    }
  }
  for (const std::string& path : reports) {
    fits.push_back(load_fit_report(path));
    labels.push_back(path);
  }
  const auto rows = compare(fits, labels);
  if (o.format == "csv") {
    std::ostringstream os;
    write_comparison_csv(os, rows);
    emit(o, out, os.str());
  } else {
    emit(o, out, dump(comparison_json(rows)));
  }
  bool all = true;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i].convergence.converged) {
      err << labels[i] << " did not converge: " << fits[i].convergence.message << '\n';
      all = false;
    }
  }
  return all ? kExitOk : kExitConvergence;
}

int run_profile(const DataOpts& d, SpecOpts s, const std::vector<std::string>& taus, const FitOpts& f,
                const Output& o, std::ostream& out, std::ostream& err) {
  if (s.preset.empty() && s.config.empty()) s.preset = "model7";
  const PairedData data = load(d);
  const ModelSpec spec = build_spec(s);
  std::vector<double> values = parse_reals(taus, "--tau");
  const FitOptions options = fit_options(f, spec);
  const ProfileResult profile = profile_tau(spec, data, values, options);
  if (o.format == "json") {
    emit(o, out, dump(profile_json(profile, options.hessian)));
  } else {
    std::ostringstream os;
    write_profile_csv(os, profile);
    emit(o, out, os.str());
  }
  bool all = profile.full.convergence.converged;
  for (const ProfileRow& r : profile.rows) {
    if (!r.converged) {
      err << "profile fit at tau=" << r.tau << " did not converge: " << r.message << '\n';
      all = false;
    }
  }
  return all ? kExitOk : kExitConvergence;
}

int run_dependence(const std::vector<std::string>& omegas, const std::vector<std::string>& lambdas,
                   bool spearman, unsigned threads, const Output& o, std::ostream& out) {
  const std::vector<double> om = parse_reals(omegas, "--omega");
  const std::vector<double> la = parse_reals(lambdas, "--lambda");
  struct Row {
    double omega, lambda, k, s, bound;
  };
  std::vector<Row> rows;
  for (double w : om)
    for (double l : la) {
      CopulaParams p{w, l};
      try {
        p.validate();
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
      rows.push_back({w, l, 0.0, std::nan(""), spearman_bound(w)});
    }
  // Grid points are independent; shards write disjoint rows.
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, rows.size()));
  std::vector<std::string> failures(workers);
  auto work = [&](std::size_t shard) {
    try {
      for (std::size_t i = shard; i < rows.size(); i += workers) {
        const CopulaParams p{rows[i].omega, rows[i].lambda};
        rows[i].k = kendall_tau(p);
        if (spearman) rows[i].s = spearman_rho(p);
      }
    } catch (const std::exception& e) {
      failures[shard] = e.what();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (const std::string& msg : failures)
    if (!msg.empty()) throw ConvergenceError(msg, std::nan(""));

  if (o.format == "json") {
    Json j = Json::array();
    for (const Row& r : rows)
      j.push_back({{"omega", r.omega},
                   {"lambda", r.lambda},
                   {"kendall_tau", number_or_null(r.k)},
                   {"spearman_rho", number_or_null(r.s)},
                   {"spearman_bound", number_or_null(r.bound)}});
    emit(o, out, dump(j));
  } else {
    std::ostringstream os;
    os << "omega,lambda,kendall_tau,spearman_rho,spearman_bound\n";
    for (const Row& r : rows)
      os << csv_number(r.omega) << ',' << csv_number(r.lambda) << ',' << csv_number(r.k) << ','
         << csv_number(r.s) << ',' << csv_number(r.bound) << '\n';
    emit(o, out, os.str());
  }
  return kExitOk;
}

struct ModelOpts {
  std::string report;
  std::vector<std::string> at;
  std::string family = "apgw";
  double lambda = 1.0;
  double omega = 0.5;
  double gamma1 = 1.0, tau1 = 1.0, phi1 = 1.0;
  double gamma2 = 1.0, tau2 = 1.0, phi2 = 1.0;
};

BivariateModel build_model(const ModelOpts& m) {
  BivariateModel model;
  if (!m.report.empty()) {
    const FitResult f = load_fit_report(m.report);
    std::vector<double> row(f.covariate_names.size(), 0.0);
    for (const std::string& a : m.at) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw InputError("--at expects NAME=VALUE, got '" + a + "'");
      const std::string name = a.substr(0, eq);
      const auto it = std::find(f.covariate_names.begin(), f.covariate_names.end(), name);
      if (it == f.covariate_names.end()) throw InputError("report has no covariate '" + name + "'");
      row[static_cast<std::size_t>(it - f.covariate_names.begin())] =
          parse_real(a.substr(eq + 1), "--at");
    }
    model = f.model_at(row);
  } else {
    model.family = m.family == "pgw" ? Family::kPgw : Family::kApgw;
    model.lambda = m.lambda;
    model.omega = m.omega;
    model.margin1 = {m.gamma1, m.tau1, m.phi1};
    model.margin2 = {m.gamma2, m.tau2, m.phi2};
  }
  try {
    model.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid model: ") + e.what());
  }
  return model;
}

int run_simulate(const ModelOpts& m, std::size_t n, double censor_rate, std::uint64_t seed,
                 const std::string& layout, const Output& o, std::ostream& out) {
  if (n == 0) throw InputError("--n must be positive");
  if (!(censor_rate >= 0.0 && censor_rate < 1.0)) throw InputError("--censor-rate must lie in [0, 1)");
  const BivariateModel model = build_model(m);
  const PairedData data = simulate_dataset(model, n, censor_rate, seed);
  std::ostringstream os;
  if (layout == "long")
    write_long_csv(os, data);
  else
    write_wide_csv(os, data);
  emit(o, out, os.str());
  return kExitOk;
}

int run_km(const DataOpts& d, const std::string& by, const std::string& report, int curve_points,
           const Output& o, std::ostream& out) {
  const PairedData data = load(d);
  std::vector<CurvePoint> points;
  struct Step {
    int at_risk, events;
  };
  std::map<std::size_t, Step> steps;  // index into points
  if (!report.empty()) {
    const FitResult f = load_fit_report(report);
    if (f.covariate_names != data.covariate_names) {
      for (const std::string& name : f.covariate_names) data.covariate_index(name);
    }
    double t_max = 0.0;
    for (const PairedRecord& r : data.records) t_max = std::max({t_max, r.t1, r.t2});
    std::vector<double> grid;
    for (int i = 1; i <= curve_points; ++i) grid.push_back(t_max * i / curve_points);
    points = export_fitted_curves(f, data, grid);
  } else {
    std::vector<double> levels;
    std::size_t column = 0;
    if (!by.empty()) {
      column = data.covariate_index(by);
      for (const PairedRecord& r : data.records) levels.push_back(r.covariates[column]);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    } else {
      levels.push_back(0.0);
    }
    for (double level : levels) {
      std::string group = "all";
      if (!by.empty()) {
        std::ostringstream g;
        g << by << '=' << level;
        group = g.str();
      }
      for (int arm = 1; arm <= 2; ++arm) {
        std::vector<double> times;
        std::vector<bool> events;
        for (const PairedRecord& r : data.records) {
          if (!by.empty() && r.covariates[column] != level) continue;
          times.push_back(arm == 1 ? r.t1 : r.t2);
          events.push_back(arm == 1 ? r.d1 : r.d2);
        }
        const KmCurve km = kaplan_meier(times, events);
        steps[points.size()] = {static_cast<int>(times.size()), 0};
        points.push_back({"km", arm, group, 0.0, 1.0});
        for (std::size_t i = 0; i < km.times.size(); ++i) {
          steps[points.size()] = {km.at_risk[i], km.events[i]};
          points.push_back({"km", arm, group, km.times[i], km.survival[i]});
        }
      }
    }
  }
  if (o.format == "json") {
    Json j = Json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const CurvePoint& p = points[i];
      Json row = {{"source", p.source}, {"arm", p.arm}, {"group", p.group}, {"time", p.time},
                  {"survival", number_or_null(p.survival)}};
      if (auto it = steps.find(i); it != steps.end()) {
        row["at_risk"] = it->second.at_risk;
        row["events"] = it->second.events;
      }
      j.push_back(row);
    }
    emit(o, out, dump(j));
  } else if (report.empty()) {
    std::ostringstream os;
    os << "arm,group,time,survival,at_risk,events\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const CurvePoint& p = points[i];
      os << p.arm << ',' << p.group << ',' << csv_number(p.time) << ',' << csv_number(p.survival)
         << ',' << steps[i].at_risk << ',' << steps[i].events << '\n';
    }
    emit(o, out, os.str());
  } else {
    std::ostringstream os;
    write_curves_csv(os, points);
    emit(o, out, os.str());
  }
  return kExitOk;
}

int run_verify(const std::string& which, double gamma, double kappa, double omega, double lambda,
               std::size_t n, std::uint64_t seed, const std::string& mixing, const Output& o,
               std::ostream& out) {
  if (n < 2) throw InputError("--n must be at least 2");
  VerificationReport rep;
  try {
    if (which == "1")
      rep = verify_result1(gamma, kappa, omega, lambda, n, seed,
                           mixing == "ig" ? MixingLaw::kInverseGaussian : MixingLaw::kTemperedStable);
    else if (which == "A1")
      rep = verify_resultA1(gamma, kappa, omega, n, seed);
    else
      rep = verify_weibull_extension_link(gamma, n, seed);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  if (o.format == "csv") {
    std::ostringstream os;
    os << "t,empirical,target,abs_dev\n";
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
      os << csv_number(rep.grid[i]) << ',' << csv_number(rep.empirical[i]) << ','
         << csv_number(rep.target[i]) << ',' << csv_number(std::abs(rep.empirical[i] - rep.target[i]))
         << '\n';
    emit(o, out, os.str());
  } else {
    Json j;
    j["result"] = which;
    j["parameters"] = {{"gamma", gamma}, {"kappa", kappa}, {"omega", omega}, {"lambda", lambda},
                       {"mixing", mixing}};
    j["n"] = rep.n;
    j["seed"] = seed;
    j["max_abs_dev"] = rep.max_abs_dev;
    j["ks_band_95"] = rep.ks_band_95;
    j["within_band"] = rep.max_abs_dev <= rep.ks_band_95;
    Json grid = Json::array();
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
      grid.push_back({{"t", rep.grid[i]}, {"empirical", rep.empirical[i]}, {"target", rep.target[i]}});
    j["grid"] = grid;
    emit(o, out, dump(j));
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bivariate survival models with power generalized Weibull margins", "pgw"};
  app.require_subcommand(1);

  unsigned threads = 1;
  try {
    threads = default_threads();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  DataOpts data;
  SpecOpts spec;
  FitOpts fopts;
  fopts.threads = threads;
  Output output;

  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit; writes a JSON report");
  std::string curves_path;
  int curve_points = 200;
  add_data(fit_cmd, data);
  add_spec(fit_cmd, spec);
  add_fit(fit_cmd, fopts);
  fit_cmd->add_option("--curves", curves_path, "Also write fitted and Kaplan-Meier curves as CSV");
  fit_cmd->add_option("--curve-points", curve_points, "Grid size for --curves")->check(CLI::PositiveNumber);
  add_output(fit_cmd, output, "json", {"json"});

  auto* cmp_cmd = app.add_subcommand("compare", "Fit several models and tabulate AIC/BIC");
  std::vector<std::string> presets;
  std::string set;
  std::vector<std::string> reports;
  add_data(cmp_cmd, data, false);
  add_fit(cmp_cmd, fopts);
  cmp_cmd->add_option("--presets", presets, "Presets to fit")->delimiter(',')->check(CLI::IsMember(preset_names()));
  cmp_cmd->add_option("--set", set, "Preset group")->check(CLI::IsMember({"treatment", "diabetes"}));
  cmp_cmd->add_option("--report", reports, "Existing fit reports to include (repeatable)");
  add_output(cmp_cmd, output, "csv", {"csv", "json"});

  auto* prof_cmd = app.add_subcommand("profile-tau", "Profile likelihood over a common tau");
  std::vector<std::string> taus = {"0", "0.07", "0.15", "0.57", "1", "1.23", "1.72", "inf"};
  add_data(prof_cmd, data);
  add_spec(prof_cmd, spec);
  add_fit(prof_cmd, fopts);
  prof_cmd->add_option("--tau", taus, "Tau values (inf allowed)")->delimiter(',');
  add_output(prof_cmd, output, "csv", {"csv", "json"});

  auto* dep_cmd = app.add_subcommand("dependence", "Kendall and Spearman grids of the copula");
  std::vector<std::string> omegas = {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"};
  std::vector<std::string> lambdas = {"0.01", "0.1", "0.5", "1", "2", "5", "10"};
  bool no_spearman = false;
  dep_cmd->add_option("--omega", omegas, "Omega values")->delimiter(',');
  dep_cmd->add_option("--lambda", lambdas, "Lambda values")->delimiter(',');
  dep_cmd->add_flag("--no-spearman", no_spearman, "Skip the Spearman quadrature");
  dep_cmd->add_option("--threads", fopts.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_output(dep_cmd, output, "csv", {"csv", "json"});

  auto* sim_cmd = app.add_subcommand("simulate", "Draw a censored paired data set");
  ModelOpts model;
  std::size_t n = 197;
  double censor_rate = 0.0;
  std::string sim_layout = "wide";
  sim_cmd->add_option("--report", model.report, "Fit report supplying the model");
  sim_cmd->add_option("--at", model.at, "Covariate value NAME=VALUE for --report (repeatable)");
  sim_cmd->add_option("--family", model.family)->check(CLI::IsMember({"pgw", "apgw"}));
  sim_cmd->add_option("--lambda", model.lambda);
  sim_cmd->add_option("--omega", model.omega);
  sim_cmd->add_option("--gamma1", model.gamma1);
  sim_cmd->add_option("--tau1", model.tau1);
  sim_cmd->add_option("--phi1", model.phi1);
  sim_cmd->add_option("--gamma2", model.gamma2);
  sim_cmd->add_option("--tau2", model.tau2);
  sim_cmd->add_option("--phi2", model.phi2);
  sim_cmd->add_option("--n", n, "Number of pairs");
  sim_cmd->add_option("--censor-rate", censor_rate, "Expected censored fraction per margin");
  sim_cmd->add_option("--seed", fopts.seed, "Random seed");
  sim_cmd->add_option("--layout", sim_layout)->check(CLI::IsMember({"wide", "long"}));
  add_output(sim_cmd, output, "csv", {"csv"});

  auto* km_cmd = app.add_subcommand("km", "Kaplan-Meier curves, optionally with fitted curves");
  std::string by;
  std::string km_report;
  add_data(km_cmd, data);
  km_cmd->add_option("--by", by, "Covariate to stratify on");
  km_cmd->add_option("--report", km_report, "Fit report; adds model curves per covariate level");
  km_cmd->add_option("--curve-points", curve_points, "Grid size for model curves")->check(CLI::PositiveNumber);
  add_output(km_cmd, output, "csv", {"csv", "json"});

  auto* ver_cmd = app.add_subcommand("verify-frailty", "Monte Carlo check of a frailty mixture identity");
  std::string which = "1";
  double v_gamma = 1.5, v_kappa = 1.0, v_omega = 0.5, v_lambda = 1.0;
  std::size_t v_n = 100000;
  std::string mixing = "ts";
  ver_cmd->add_option("--result", which, "Identity: 1 (PGW), A1 (APGW) or weibull-link")
      ->check(CLI::IsMember({"1", "A1", "weibull-link"}));
  ver_cmd->add_option("--gamma", v_gamma);
  ver_cmd->add_option("--kappa", v_kappa);
  ver_cmd->add_option("--omega", v_omega);
  ver_cmd->add_option("--lambda", v_lambda);
  ver_cmd->add_option("--n", v_n, "Monte Carlo sample size");
  ver_cmd->add_option("--seed", fopts.seed, "Random seed");
  ver_cmd->add_option("--mixing", mixing, "Frailty source for --result 1")->check(CLI::IsMember({"ts", "ig"}));
  add_output(ver_cmd, output, "json", {"json", "csv"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (fit_cmd->parsed())
      return run_fit(data, spec, fopts, curves_path, curve_points, output, out, err);
    if (cmp_cmd->parsed())
      return run_compare(data, presets, set, reports, fopts, output, out, err);
    if (prof_cmd->parsed()) return run_profile(data, spec, taus, fopts, output, out, err);
    if (dep_cmd->parsed()) return run_dependence(omegas, lambdas, !no_spearman, fopts.threads, output, out);
    if (sim_cmd->parsed()) return run_simulate(model, n, censor_rate, fopts.seed, sim_layout, output, out);
    if (km_cmd->parsed()) return run_km(data, by, km_report, curve_points, output, out);
    if (ver_cmd->parsed())
      return run_verify(which, v_gamma, v_kappa, v_omega, v_lambda, v_n, fopts.seed, mixing, output, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NoSolutionError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const OptimizationError& e) {
    err << "convergence failure: " << e.what() << '\n';
    for (const std::string& d : e.diagnostics()) err << "  " << d << '\n';
    return kExitConvergence;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const EvaluationError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  }
  return kExitInput;
}

}  // namespace pgw::app
