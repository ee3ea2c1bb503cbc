#include "pgw/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "pgw/copula.hpp"
#include "pgw/errors.hpp"

namespace pgw {

std::string_view to_string(HessianRule rule) {
  return rule == HessianRule::kForwardNlm ? "nlm" : "central";
}

HessianRule parse_hessian_rule(std::string_view text) {
  if (text == "nlm") return HessianRule::kForwardNlm;
  if (text == "central") return HessianRule::kCentral;
  throw DomainError("unknown Hessian rule '" + std::string(text) + "' (expected nlm or central)");
}

BivariateModel FitResult::model_at(const std::vector<double>& covariates) const {
  return ParamLayout(spec, covariate_names).model_at(theta, covariates);
}

double kendall_tau_of(const BivariateModel& model) { return kendall_tau(model.copula()); }

double kendall_tau_at(const FitResult& fit, const std::vector<double>& covariates) {
  return kendall_tau_of(fit.model_at(covariates));
}

namespace {

constexpr double kInvalidObjective = -kLogLikelihoodSentinel;

void fill_covariance(FitResult& result, const Objective& objective, HessianRule rule) {
  const Eigen::Index k = result.theta.size();
  result.covariance = Eigen::MatrixXd::Constant(k, k, std::nan(""));
  result.se = Eigen::VectorXd::Constant(k, std::nan(""));
  result.covariance_ok = false;
  Eigen::MatrixXd h;
  try {
    h = rule == HessianRule::kForwardNlm ? forward_hessian_nlm(objective, result.theta)
                                         : numeric_hessian(objective, result.theta);
  } catch (const EvaluationError&) {
    return;
  }
  if (!h.allFinite()) return;
  const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd w = eig.eigenvalues();
  if (w.cwiseAbs().minCoeff() <= 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff())) return;
  const Eigen::MatrixXd& v = eig.eigenvectors();
  result.covariance = v * w.cwiseInverse().asDiagonal() * v.transpose();
  result.covariance_ok = w.minCoeff() > 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double var = result.covariance(i, i);
    if (var > 0.0) result.se[i] = std::sqrt(var);
  }
}

}  // namespace

FitResult fit(const ModelSpec& spec, const PairedData& data, const FitOptions& options) {
  spec.validate();
  const LogLikelihood ll(spec, data, options.threads);
  const Eigen::Index k = static_cast<Eigen::Index>(ll.dimension());

  const Objective objective = [&ll](const Eigen::VectorXd& theta) {
    const LikelihoodEvaluation e = ll.evaluate(theta);
    return e.finite ? -e.value : kInvalidObjective;
  };

  std::vector<Eigen::VectorXd> starts = options.starts;
  if (starts.empty()) starts.push_back(Eigen::VectorXd::Zero(k));
  for (const auto& s : starts) {
    if (s.size() != k) throw DomainError("fit: a start has the wrong dimension");
  }
  if (options.random_starts > 0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, options.start_spread);
    const Eigen::VectorXd centre = starts.front();
    for (int r = 0; r < options.random_starts; ++r) {
      Eigen::VectorXd s = centre;
      for (Eigen::Index i = 0; i < k; ++i) s[i] += noise(rng);
      starts.push_back(s);
    }
  }

  std::vector<std::string> diagnostics;
  NewtonResult best;
  bool have_best = false;
  int failed = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      if (objective(starts[i]) >= kInvalidObjective) throw DomainError("likelihood not finite at start");
      NewtonResult r = minimize_newton(objective, starts[i], options.newton);
      if (!(r.value < kInvalidObjective)) throw DomainError("optimum is not finite");
      if (!have_best || r.value < best.value) {
        best = std::move(r);
        have_best = true;
      }
    } catch (const std::exception& e) {
      ++failed;
      std::ostringstream os;
      os << "start " << i << ": " << e.what();
      diagnostics.push_back(os.str());
    }
  }
  if (!have_best) throw OptimizationError("fit: every start failed", diagnostics);

  FitResult result;
  result.spec = spec;
  result.names = ll.layout().names();
  result.covariate_names = data.covariate_names;
  result.theta = best.x;
  result.loglik = -best.value;
  result.n_subjects = data.size();
  const double dim = static_cast<double>(k);
  result.aic = 2.0 * dim - 2.0 * result.loglik;
  result.bic = dim * std::log(static_cast<double>(data.size())) - 2.0 * result.loglik;
  result.convergence.converged = best.converged;
  result.convergence.iterations = best.iterations;
  result.convergence.gradient_max_norm = best.gradient.cwiseAbs().maxCoeff();
  result.convergence.message = best.message;
  result.convergence.starts_tried = static_cast<int>(starts.size());
  result.convergence.starts_failed = failed;
  fill_covariance(result, objective, options.hessian);
  try {
    result.kendall_tau = kendall_tau_at(result);
  } catch (const std::exception&) {
    result.kendall_tau = std::nan("");
  }
  return result;
}

Eigen::VectorXd embed_start(const FitResult& from, const ModelSpec& spec) {
  const std::vector<std::string> names = spec.parameter_names();
  Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = std::find(from.names.begin(), from.names.end(), names[i]);
    if (it != from.names.end()) start[static_cast<Eigen::Index>(i)] = from.theta[it - from.names.begin()];
  }
  return start;
}

std::vector<ComparisonRow> compare(const std::vector<FitResult>& fits,
                                   const std::vector<std::string>& labels) {
  if (fits.empty()) throw DomainError("compare: no fits");
  if (!labels.empty() && labels.size() != fits.size())
    throw DomainError("compare: labels and fits differ in length");
  std::vector<ComparisonRow> rows;
  double min_aic = std::numeric_limits<double>::infinity();
  double min_bic = min_aic;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const FitResult& f = fits[i];
    ComparisonRow row;
    row.label = labels.empty() ? f.spec.describe() : labels[i];
    row.dimension = f.dimension();
    row.loglik = f.loglik;
    row.aic = f.aic;
    row.bic = f.bic;
    row.kendall_tau = f.kendall_tau;
    min_aic = std::min(min_aic, f.aic);
    min_bic = std::min(min_bic, f.bic);
    rows.push_back(row);
  }
  for (ComparisonRow& row : rows) {
    row.delta_aic = row.aic - min_aic;
    row.delta_bic = row.bic - min_bic;
  }
  return rows;
}

namespace {

FitResult fit_at_tau(ModelSpec& fixed, const PairedData& data, const FitOptions& options, double tau,
                     const Eigen::VectorXd& start) {
  fixed.fixed_tau = tau;
  FitOptions o = options;
  o.starts = {start};
  o.random_starts = 0;
  return fit(fixed, data, o);
}

// Warm start from the neighbouring grid value. A failed or unconverged jump is
// retried through intermediate values 0.25 apart on the log1p scale; an
// infinite target is approached through tau = 30.
FitResult continued_fit(ModelSpec& fixed, const PairedData& data, const FitOptions& options, double from,
                        double to, const Eigen::VectorXd& start) {
  try {
    FitResult direct = fit_at_tau(fixed, data, options, to, start);
    if (direct.convergence.converged) return direct;
  } catch (const std::exception&) {
  }
  const double a = std::log1p(from);
  const double b = std::log1p(std::isinf(to) ? 30.0 : to);
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.25)));
  Eigen::VectorXd current = start;
  for (int k = 1; k <= steps; ++k) {
    if (k == steps && !std::isinf(to)) break;
    try {
      current = fit_at_tau(fixed, data, options, std::expm1(a + (b - a) * k / steps), current).theta;
    } catch (const std::exception&) {
    }
  }
  return fit_at_tau(fixed, data, options, to, current);
}

}  // namespace

ProfileResult profile_tau(const ModelSpec& spec, const PairedData& data,
                          const std::vector<double>& tau_values, const FitOptions& options) {
  spec.validate();
  if (!spec.common_tau || spec.fixed_tau)
    throw DomainError("profile_tau: the spec needs a free common tau");
  for (double t : tau_values) {
    if (std::isnan(t) || !(t > -1.0)) throw DomainError("profile_tau: tau values must exceed -1");
  }

  ProfileResult out;
  out.full = fit(spec, data, options);
  const int slot = ParamLayout(spec, data.covariate_names).index_of("theta_tau");
  const double tau_hat = std::expm1(out.full.theta[slot]);

  std::vector<std::size_t> below, above;
  for (std::size_t i = 0; i < tau_values.size(); ++i)
    (tau_values[i] < tau_hat ? below : above).push_back(i);
  std::sort(below.begin(), below.end(),
            [&](std::size_t a, std::size_t b) { return tau_values[a] > tau_values[b]; });
  std::sort(above.begin(), above.end(),
            [&](std::size_t a, std::size_t b) { return tau_values[a] < tau_values[b]; });

  out.rows.resize(tau_values.size());
  for (const auto* chain : {&below, &above}) {
    ModelSpec fixed = spec;
    fixed.fixed_tau = 0.0;
    Eigen::VectorXd current = embed_start(out.full, fixed);
    double previous = tau_hat;
    for (std::size_t idx : *chain) {
      ProfileRow& row = out.rows[idx];
      row.tau = tau_values[idx];
      try {
        const FitResult f = continued_fit(fixed, data, options, previous, row.tau, current);
        row.loglik = f.loglik;
        row.kendall_tau = f.kendall_tau;
        row.chi2 = std::max(0.0, 2.0 * (out.full.loglik - f.loglik));
        row.converged = f.convergence.converged;
        row.message = f.convergence.message;
        row.theta = f.theta;
        current = f.theta;
        previous = row.tau;
      } catch (const std::exception& e) {
        row.converged = false;
        row.loglik = std::nan("");
        row.kendall_tau = std::nan("");
        row.chi2 = std::nan("");
        row.message = e.what();
      }
    }
  }
  return out;
}

Interval delta_method(const FitResult& fit,
                      const std::function<double(const Eigen::VectorXd&)>& g,
                      IntervalScale scale, double level) {
  if (!fit.covariance_ok) throw DomainError("delta_method: the fit's covariance is flagged");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("delta_method: level must lie in (0, 1)");

  std::function<double(double)> forward = [](double x) { return x; };
  std::function<double(double)> back = [](double x) { return x; };
  switch (scale) {
    case IntervalScale::kIdentity: break;
    case IntervalScale::kLog:
      forward = [](double x) { return std::log(x); };
      back = [](double x) { return std::exp(x); };
      break;
    case IntervalScale::kLogit:
      forward = [](double x) { return logit(x); };
      back = [](double x) { return logistic(x); };
      break;
    case IntervalScale::kLog1p:
      forward = [](double x) { return std::log1p(x); };
      back = [](double x) { return std::expm1(x); };
      break;
  }
  const Objective transformed = [&](const Eigen::VectorXd& theta) { return forward(g(theta)); };
  const Eigen::VectorXd grad = numeric_gradient(transformed, fit.theta);
  const double variance = grad.dot(fit.covariance * grad);
  if (!(variance >= 0.0)) throw DomainError("delta_method: negative variance");

  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + level / 2.0);
  Interval out;
  out.estimate = g(fit.theta);
  out.se = std::sqrt(variance);
  const double centre = forward(out.estimate);
  const double a = back(centre - z * out.se);
  const double b = back(centre + z * out.se);
  out.lower = std::min(a, b);
  out.upper = std::max(a, b);
  return out;
}

}  // namespace pgw
