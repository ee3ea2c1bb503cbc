#pragma once

#include <string>

#include <Eigen/Dense>

#include "pgw/data.hpp"
#include "pgw/model_spec.hpp"

namespace pgw {

/// Value reported for a log-likelihood that is not finite, so that line
/// searches treat the point as very poor instead of aborting.
inline constexpr double kLogLikelihoodSentinel = -1e10;

struct LikelihoodEvaluation {
  double value = 0.0;       // kLogLikelihoodSentinel when !finite
  bool finite = true;
  std::string failing_id;   // first record with a non-finite contribution
  std::string message;
};

/// Censored log-likelihood bound to one spec and data set. The data must
/// outlive this object.
///
/// Per-record terms are summed in fixed blocks of 64 and the block sums are
/// combined pairwise, so the value does not depend on the thread count.
class LogLikelihood {
 public:
  LogLikelihood(const ModelSpec& spec, const PairedData& data, unsigned threads = 1);

  LikelihoodEvaluation evaluate(const Eigen::VectorXd& theta) const;
  const ParamLayout& layout() const { return layout_; }
  const PairedData& data() const { return *data_; }
  std::size_t dimension() const { return layout_.dimension(); }

 private:
  ParamLayout layout_;
  const PairedData* data_;
  unsigned threads_;
};

/// Sum of per-subject log contributions. Throws DomainError naming the record
/// whose contribution is not finite.
double log_likelihood(const ModelSpec& spec, const Eigen::VectorXd& theta,
                      const PairedData& data, unsigned threads = 1);

/// Pairwise sum of `values` in blocks of 64.
double blocked_pairwise_sum(const std::vector<double>& values);

}  // namespace pgw
