#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pgw/data.hpp"
#include "pgw/likelihood.hpp"
#include "pgw/model_spec.hpp"
#include "pgw/optimize.hpp"

namespace pgw {

/// Finite-difference rule for the observed information behind standard errors.
enum class HessianRule {
  kForwardNlm,  // forward differences with R nlm's steps; matches published SEs
  kCentral,     // numeric_hessian with the default StepRule
};

std::string_view to_string(HessianRule rule);
HessianRule parse_hessian_rule(std::string_view text);

struct FitOptions {
  /// Explicit starting points. Empty means the zero vector.
  std::vector<Eigen::VectorXd> starts;
  /// Extra starts drawn as the first start plus N(0, start_spread^2) noise.
  int random_starts = 0;
  double start_spread = 1.0;
  std::uint64_t seed = 1;
  NewtonOptions newton;
  HessianRule hessian = HessianRule::kForwardNlm;
  unsigned threads = 1;
};

struct Convergence {
  bool converged = false;
  int iterations = 0;
  double gradient_max_norm = 0.0;
  std::string message;
  int starts_tried = 0;
  int starts_failed = 0;
};

struct FitResult {
  ModelSpec spec;
  std::vector<std::string> names;
  std::vector<std::string> covariate_names;
  Eigen::VectorXd theta;
  double loglik = 0.0;
  std::size_t n_subjects = 0;
  double aic = 0.0;
  double bic = 0.0;  // n = number of subjects
  Eigen::MatrixXd covariance;
  bool covariance_ok = false;
  Eigen::VectorXd se;  // NaN where the variance is not positive
  double kendall_tau = 0.0;  // at the reference covariate level
  Convergence convergence;

  std::size_t dimension() const { return static_cast<std::size_t>(theta.size()); }
  BivariateModel model_at(const std::vector<double>& covariates = {}) const;
};

/// Maximum-likelihood fit. The best finite optimum across starts is returned,
/// flagged when its gradient misses the tolerance. Throws OptimizationError when
/// no start gives a finite optimum.
FitResult fit(const ModelSpec& spec, const PairedData& data, const FitOptions& options = {});

/// A start for `spec` that copies coordinates of `from` with matching names
/// and sets the rest to zero.
Eigen::VectorXd embed_start(const FitResult& from, const ModelSpec& spec);

/// Kendall's tau of the fitted copula for one covariate row.
double kendall_tau_at(const FitResult& fit, const std::vector<double>& covariates = {});
double kendall_tau_of(const BivariateModel& model);

struct ComparisonRow {
  std::string label;
  std::size_t dimension = 0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double delta_aic = 0.0;
  double delta_bic = 0.0;
  double kendall_tau = 0.0;
};

std::vector<ComparisonRow> compare(const std::vector<FitResult>& fits,
                                   const std::vector<std::string>& labels = {});

struct ProfileRow {
  double tau = 0.0;
  double loglik = 0.0;
  double kendall_tau = 0.0;
  double chi2 = 0.0;  // 2 (l_max - l_tau), floored at 0
  bool converged = false;
  std::string message;
  Eigen::VectorXd theta;
};

struct ProfileResult {
  FitResult full;
  std::vector<ProfileRow> rows;  // in the order of the requested tau values
};

/// Refits with the common tau held at each value. Values are visited outward
/// from the unconstrained estimate, each fit starting from its neighbour's
/// optimum. A failed row is flagged and does not stop the others.
ProfileResult profile_tau(const ModelSpec& spec, const PairedData& data,
                          const std::vector<double>& tau_values, const FitOptions& options = {});

/// Scale on which a delta-method interval is symmetric.
enum class IntervalScale {
  kIdentity,
  kLog,     // positive quantities such as quantile ratios
  kLogit,   // quantities in (0, 1) such as Kendall's tau
  kLog1p,   // quantities above -1 such as tau
};

struct Interval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double se = 0.0;  // on the interval scale
};

/// g(theta_hat) with a Wald interval built on `scale` and mapped back.
/// Throws DomainError when the fit's covariance is flagged.
Interval delta_method(const FitResult& fit, const std::function<double(const Eigen::VectorXd&)>& g,
                      IntervalScale scale = IntervalScale::kIdentity, double level = 0.95);

}  // namespace pgw
