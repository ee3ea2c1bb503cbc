#include "pgw/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pgw/errors.hpp"

namespace pgw {

namespace {

constexpr std::size_t kBlock = 64;

double pairwise(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

}  // namespace

double blocked_pairwise_sum(const std::vector<double>& values) {
  std::vector<double> blocks;
  for (std::size_t start = 0; start < values.size(); start += kBlock) {
    const std::size_t end = std::min(values.size(), start + kBlock);
    double s = 0.0;
    for (std::size_t i = start; i < end; ++i) s += values[i];
    blocks.push_back(s);
  }
  return pairwise(blocks.data(), blocks.size());
}

LogLikelihood::LogLikelihood(const ModelSpec& spec, const PairedData& data, unsigned threads)
    : layout_(spec, data.covariate_names), data_(&data), threads_(std::max(1u, threads)) {
  if (data.empty()) throw InputError("log-likelihood needs at least one record");
  data.validate();
}

LikelihoodEvaluation LogLikelihood::evaluate(const Eigen::VectorXd& theta) const {
  LikelihoodEvaluation out;
  if (!theta.allFinite()) {
    out.finite = false;
    out.value = kLogLikelihoodSentinel;
    out.message = "theta has non-finite entries";
    return out;
  }
  const auto& records = data_->records;
  const std::size_t n = records.size();
  std::vector<double> terms(n);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PairedRecord& r = records[i];
      try {
        const BivariateModel model = layout_.model_at(theta, r.covariates);
        terms[i] = log_contribution(r.t1, r.d1, r.t2, r.d2, model);
      } catch (const std::exception& e) {
        terms[i] = std::nan("");
        errors[i] = e.what();
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(threads_, (n + kBlock - 1) / kBlock));
  if (threads <= 1) {
    work(0, n);
  } else {
    // Shards are whole blocks; the reduction below is the same for any split.
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b0 = blocks * t / threads;
      const std::size_t b1 = blocks * (t + 1) / threads;
      pool.emplace_back(work, b0 * kBlock, std::min(n, b1 * kBlock));
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(terms[i])) {
      out.finite = false;
      out.value = kLogLikelihoodSentinel;
      out.failing_id = records[i].id;
      out.message = errors[i].empty() ? "non-finite contribution" : errors[i];
      return out;
    }
  }
  out.value = blocked_pairwise_sum(terms);
  return out;
}

double log_likelihood(const ModelSpec& spec, const Eigen::VectorXd& theta,
                      const PairedData& data, unsigned threads) {
  const LikelihoodEvaluation e = LogLikelihood(spec, data, threads).evaluate(theta);
  if (!e.finite) {
    throw DomainError("log-likelihood is not finite at record '" + e.failing_id + "': " +
                      e.message);
  }
  return e.value;
}

}  // namespace pgw
