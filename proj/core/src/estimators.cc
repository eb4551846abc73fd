#include "phirm/estimators.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "phirm/odp.h"

namespace phirm {

namespace {

void check_arity(const CumulativeRegret& exact, std::span<double> out, int dim) {
  if (static_cast<int>(exact.values.size()) != dim ||
      static_cast<int>(out.size()) != dim)
    throw std::invalid_argument("estimator: arity mismatch");
}

class ExactEstimator final : public RegretEstimator {
 public:
  explicit ExactEstimator(int dim) : dim_(dim) {}
  void estimate(const CumulativeRegret& exact, std::span<double> out) override {
    check_arity(exact, out, dim_);
    for (int i = 0; i < dim_; ++i) out[i] = exact.values[i];
  }
  void reset() override {}

 private:
  int dim_;
};

class NoisyEstimator final : public RegretEstimator {
 public:
  NoisyEstimator(int dim, double scale, std::uint64_t seed)
      : dim_(dim), scale_(scale), seed_(seed), rng_(seed) {}
  void estimate(const CumulativeRegret& exact, std::span<double> out) override {
    check_arity(exact, out, dim_);
    for (int i = 0; i < dim_; ++i) {
      const double u = next_unit(rng_);
      out[i] = exact.values[i] + scale_ * (2.0 * u - 1.0);
    }
  }
  void reset() override { rng_.seed(seed_); }

 private:
  int dim_;
  double scale_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

class QuantizedEstimator final : public RegretEstimator {
 public:
  QuantizedEstimator(int dim, double quantum) : dim_(dim), quantum_(quantum) {}
  void estimate(const CumulativeRegret& exact, std::span<double> out) override {
    check_arity(exact, out, dim_);
    for (int i = 0; i < dim_; ++i)
      out[i] = quantum_ * std::round(exact.values[i] / quantum_);
  }
  void reset() override {}

 private:
  int dim_;
  double quantum_;
};

// Recursive least-squares sketch: model weights w over d features, one
// gradient step against the exact vector per call, then predict F w. With
// one-hot features and unit step the prediction collapses to the exact
// vector; a random projection of rank d < dim loses information and leaves a
// persistent estimation error for the bound terms to absorb.
class LinearEstimator final : public RegretEstimator {
 public:
  LinearEstimator(int dim, int rank, double rate, std::uint64_t seed)
      : dim_(dim), rank_(rank), rate_(rate), seed_(seed) {
    reset();
  }

  void estimate(const CumulativeRegret& exact, std::span<double> out) override {
    check_arity(exact, out, dim_);
    if (rank_ == 0) {
      // One-hot features: w lives in regret space directly.
      for (int i = 0; i < dim_; ++i) {
        weights_[i] += rate_ * (exact.values[i] - weights_[i]);
        out[i] = weights_[i];
      }
      return;
    }
    // residual = exact - F w, then w += rate * F^T residual, out = F w.
    std::vector<double>& residual = scratch_;
    residual.assign(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
      double pred = 0.0;
      for (int j = 0; j < rank_; ++j)
        pred += features_[i * rank_ + j] * weights_[j];
      residual[i] = exact.values[i] - pred;
    }
    for (int j = 0; j < rank_; ++j) {
      double grad = 0.0;
      for (int i = 0; i < dim_; ++i)
        grad += features_[i * rank_ + j] * residual[i];
      weights_[j] += rate_ * grad;
    }
    for (int i = 0; i < dim_; ++i) {
      double pred = 0.0;
      for (int j = 0; j < rank_; ++j)
        pred += features_[i * rank_ + j] * weights_[j];
      out[i] = pred;
    }
  }

  void reset() override {
    weights_.assign(rank_ == 0 ? dim_ : rank_, 0.0);
    if (rank_ > 0) {
      features_.resize(static_cast<std::size_t>(dim_) * rank_);
      std::mt19937_64 rng(seed_);
      const double scale = 1.0 / std::sqrt(static_cast<double>(rank_));
      for (double& f : features_) {
        // Box-Muller keeps the stream identical across standard libraries.
        const double u1 = std::max(next_unit(rng), 1e-300);
        const double u2 = next_unit(rng);
        f = scale * std::sqrt(-2.0 * std::log(u1)) *
            std::cos(2.0 * std::numbers::pi * u2);
      }
    }
  }

 private:
  int dim_;
  int rank_;
  double rate_;
  std::uint64_t seed_;
  std::vector<double> features_;  // dim_ x rank_, row-major
  std::vector<double> weights_;
  std::vector<double> scratch_;
};

}  // namespace

std::unique_ptr<RegretEstimator> make_estimator(const EstimatorConfig& config,
                                                int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("make_estimator: dim must be >= 1");
  switch (config.kind) {
    case EstimatorConfig::Kind::kExact:
      return std::make_unique<ExactEstimator>(dim);
    case EstimatorConfig::Kind::kNoisy:
      if (!(config.noise_scale >= 0.0) || !std::isfinite(config.noise_scale))
        throw std::invalid_argument("make_estimator: noise_scale must be >= 0");
      return std::make_unique<NoisyEstimator>(dim, config.noise_scale, seed);
    case EstimatorConfig::Kind::kQuantized:
      if (!(config.quantum > 0.0) || !std::isfinite(config.quantum))
        throw std::invalid_argument("make_estimator: quantum must be > 0");
      return std::make_unique<QuantizedEstimator>(dim, config.quantum);
    case EstimatorConfig::Kind::kLinear:
      if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate))
        throw std::invalid_argument("make_estimator: learning_rate must be > 0");
      if (config.projection_rank < 0 || config.projection_rank > dim)
        throw std::invalid_argument(
            "make_estimator: projection_rank must be in [0, dim]");
      return std::make_unique<LinearEstimator>(dim, config.projection_rank,
                                               config.learning_rate, seed);
  }
  throw std::invalid_argument("make_estimator: unknown estimator kind");
}

}  // namespace phirm
