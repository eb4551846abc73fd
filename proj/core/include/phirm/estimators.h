#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "phirm/regret.h"

namespace phirm {

// Produces the estimated cumulative regret vector the matcher acts on. The
// exact vector is offered as input so corruptions (noise, quantization,
// lossy reconstruction) are applied relative to the truth the learner
// actually accumulated.
class RegretEstimator {
 public:
  virtual ~RegretEstimator() = default;
  // Writes the estimate of `exact.values` into out (same arity).
  virtual void estimate(const CumulativeRegret& exact, std::span<double> out) = 0;
  // Restores the construction-time state (fresh noise stream, zeroed model).
  virtual void reset() = 0;
};

struct EstimatorConfig {
  enum class Kind { kExact, kNoisy, kQuantized, kLinear };

  Kind kind = Kind::kExact;
  double noise_scale = 0.0;   // noisy: entrywise uniform on [-scale, scale]
  double quantum = 0.0;       // quantized: grid pitch, > 0
  double learning_rate = 1.0; // linear: step size of the recursive fit
  int projection_rank = 0;    // linear: 0 keeps one-hot features
};

// Builds an estimator for regret vectors of the given arity. The seed feeds
// every stochastic choice (noise stream, random projection), so equal seeds
// reproduce equal estimates. Throws std::invalid_argument on bad parameters.
std::unique_ptr<RegretEstimator> make_estimator(const EstimatorConfig& config,
                                                int dim, std::uint64_t seed);

}  // namespace phirm
