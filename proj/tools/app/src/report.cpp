#include "pgw_app/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include <pgw/errors.hpp>

namespace pgw::app {

Json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  return nullptr;
}

namespace {

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw InputError("expected a number in report");
  return j.get<double>();
}

Family parse_family(const std::string& s) {
  if (s == "pgw") return Family::kPgw;
  if (s == "apgw") return Family::kApgw;
  throw InputError("unknown family '" + s + "'");
}

double natural_value(const std::string& name, double value) {
  if (name.rfind("beta_", 0) == 0) return value;
  if (name == "theta_omega") return logistic(value);
  if (name.rfind("theta_tau", 0) == 0) return std::expm1(value);
  return std::exp(value);
}

std::string natural_name(const std::string& name) {
  if (name.rfind("theta_", 0) == 0) return name.substr(6);
  return name;
}

template <class T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("report is missing '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

Json spec_to_json(const ModelSpec& spec) {
  Json j;
  j["family"] = std::string(to_string(spec.family));
  j["common_phi"] = spec.common_phi;
  j["common_gamma"] = spec.common_gamma;
  j["common_tau"] = spec.common_tau;
  j["fixed_tau"] = spec.fixed_tau ? number_or_null(*spec.fixed_tau) : Json(nullptr);
  Json terms = Json::array();
  for (const CovariateTerm& t : spec.covariate_terms)
    terms.push_back({{"target", std::string(to_string(t.target))}, {"covariate", t.covariate}});
  j["covariate_terms"] = terms;
  return j;
}

ModelSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("spec must be a JSON object");
  ModelSpec s;
  try {
    if (j.contains("family")) s.family = parse_family(j.at("family").get<std::string>());
    s.common_phi = j.value("common_phi", false);
    s.common_gamma = j.value("common_gamma", false);
    s.common_tau = j.value("common_tau", false);
    if (j.contains("fixed_tau") && !j.at("fixed_tau").is_null())
      s.fixed_tau = number_from(j.at("fixed_tau"));
    if (j.contains("covariate_terms")) {
      for (const Json& t : j.at("covariate_terms"))
        s.covariate_terms.push_back(
            {parse_target(t.at("target").get<std::string>()), t.at("covariate").get<std::string>()});
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed spec: ") + e.what());
  }
  s.validate();
  return s;
}

Json natural_parameters(const FitResult& fit) {
  Json j = Json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i)
    j[natural_name(fit.names[i])] = number_or_null(natural_value(fit.names[i], fit.theta(i)));
  if (fit.spec.fixed_tau) j["tau"] = number_or_null(*fit.spec.fixed_tau);
  return j;
}

Json fit_report(const FitResult& fit, HessianRule rule) {
  Json j;
  j["format"] = kReportFormat;
  j["spec"] = spec_to_json(fit.spec);
  Json theta = Json::object();
  Json se = Json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    theta[fit.names[i]] = number_or_null(fit.theta(i));
    se[fit.names[i]] = number_or_null(fit.se.size() ? fit.se(i) : std::nan(""));
  }
  j["theta_unconstrained"] = theta;
  j["theta_natural"] = natural_parameters(fit);
  j["se"] = se;
  j["loglik"] = number_or_null(fit.loglik);
  j["aic"] = number_or_null(fit.aic);
  j["bic"] = number_or_null(fit.bic);
  j["kendall_tau"] = number_or_null(fit.kendall_tau);
  j["n_subjects"] = fit.n_subjects;
  j["dimension"] = fit.dimension();
  j["covariate_names"] = fit.covariate_names;
  j["hessian_rule"] = std::string(to_string(rule));
  j["covariance_ok"] = fit.covariance_ok;
  Json cov = Json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c)
      row.push_back(number_or_null(fit.covariance(r, c)));
    cov.push_back(row);
  }
  j["covariance"] = cov;
  const Convergence& c = fit.convergence;
  j["convergence"] = {{"converged", c.converged},
                      {"iterations", c.iterations},
                      {"gradient_max_norm", number_or_null(c.gradient_max_norm)},
                      {"message", c.message},
                      {"starts_tried", c.starts_tried},
                      {"starts_failed", c.starts_failed}};
  return j;
}

FitResult fit_from_report(const Json& report) {
  FitResult f;
  try {
    f.spec = spec_from_json(report.at("spec"));
    f.covariate_names = report.value("covariate_names", std::vector<std::string>{});
    const ParamLayout layout(f.spec, f.covariate_names);
    f.names = layout.names();
    const Json& theta = report.at("theta_unconstrained");
    f.theta.resize(static_cast<Eigen::Index>(f.names.size()));
    for (std::size_t i = 0; i < f.names.size(); ++i) {
      if (!theta.contains(f.names[i]))
        throw InputError("report has no value for '" + f.names[i] + "'");
      f.theta(static_cast<Eigen::Index>(i)) = number_from(theta.at(f.names[i]));
    }
    f.loglik = number_from(report.at("loglik"));
    f.aic = number_from(report.at("aic"));
    f.bic = number_from(report.at("bic"));
    f.kendall_tau = number_from(report.at("kendall_tau"));
    f.n_subjects = require<std::size_t>(report, "n_subjects");
    const auto d = static_cast<Eigen::Index>(f.names.size());
    f.se = Eigen::VectorXd::Constant(d, std::nan(""));
    if (report.contains("se"))
      for (std::size_t i = 0; i < f.names.size(); ++i)
        if (report.at("se").contains(f.names[i]))
          f.se(static_cast<Eigen::Index>(i)) = number_from(report.at("se").at(f.names[i]));
    f.covariance_ok = report.value("covariance_ok", false);
    f.covariance = Eigen::MatrixXd::Constant(d, d, std::nan(""));
    if (report.contains("covariance")) {
      const Json& cov = report.at("covariance");
      if (cov.size() == static_cast<std::size_t>(d))
        for (Eigen::Index r = 0; r < d; ++r)
          for (Eigen::Index c = 0; c < d; ++c) f.covariance(r, c) = number_from(cov.at(r).at(c));
      else
        f.covariance_ok = false;
    }
    const Json& c = report.at("convergence");
    f.convergence.converged = c.value("converged", false);
    f.convergence.iterations = c.value("iterations", 0);
    f.convergence.gradient_max_norm = number_from(c.value("gradient_max_norm", Json(nullptr)));
    f.convergence.message = c.value("message", std::string());
    f.convergence.starts_tried = c.value("starts_tried", 0);
    f.convergence.starts_failed = c.value("starts_failed", 0);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed fit report: ") + e.what());
  }
  return f;
}

FitResult load_fit_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open report '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("report '" + path + "' is not valid JSON: " + e.what());
  }
  return fit_from_report(j);
}

Json comparison_json(const std::vector<ComparisonRow>& rows) {
  Json out = Json::array();
  for (const ComparisonRow& r : rows)
    out.push_back({{"label", r.label},
                   {"dimension", r.dimension},
                   {"loglik", number_or_null(r.loglik)},
                   {"aic", number_or_null(r.aic)},
                   {"bic", number_or_null(r.bic)},
                   {"delta_aic", number_or_null(r.delta_aic)},
                   {"delta_bic", number_or_null(r.delta_bic)},
                   {"kendall_tau", number_or_null(r.kendall_tau)}});
  return out;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "label,dimension,loglik,aic,bic,delta_aic,delta_bic,kendall_tau\n";
  for (const ComparisonRow& r : rows)
    out << r.label << ',' << r.dimension << ',' << r.loglik << ',' << r.aic << ',' << r.bic << ','
        << r.delta_aic << ',' << r.delta_bic << ',' << r.kendall_tau << '\n';
}

Json profile_json(const ProfileResult& profile, HessianRule rule) {
  Json rows = Json::array();
  for (const ProfileRow& r : profile.rows)
    rows.push_back({{"tau", number_or_null(r.tau)},
                    {"loglik", number_or_null(r.loglik)},
                    {"kendall_tau", number_or_null(r.kendall_tau)},
                    {"chi2", number_or_null(r.chi2)},
                    {"converged", r.converged},
                    {"message", r.message}});
  Json j;
  j["full"] = fit_report(profile.full, rule);
  j["rows"] = rows;
  return j;
}

void write_profile_csv(std::ostream& out, const ProfileResult& profile) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "tau,loglik,kendall_tau,chi2,converged\n";
  for (const ProfileRow& r : profile.rows)
    out << r.tau << ',' << r.loglik << ',' << r.kendall_tau << ',' << r.chi2 << ','
        << (r.converged ? 1 : 0) << '\n';
}

}  // namespace pgw::app
