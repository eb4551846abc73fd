#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "phirm/estimators.h"
#include "phirm/links.h"
#include "phirm/odp.h"
#include "phirm/regret.h"
#include "phirm/transforms.h"

namespace phirm {

// Column-stochastic matrix over actions: column a is the mixed action the
// operator sends delta_a to. Columns sum to one within 1e-9.
struct StochasticOperator {
  int num_actions = 0;
  std::vector<double> m;  // column-major

  double entry(int row, int col) const { return m[col * num_actions + row]; }
};

// Throws std::invalid_argument if the operator is not column-stochastic.
void validate_operator(const StochasticOperator& op, double tol = 1e-9);

// Weighted average of the family members: sum_k w_k [phi_k] / sum_k w_k.
// Weights must be nonnegative with positive sum (a zero-sum signal is the
// degenerate case the caller resolves by playing uniform).
StochasticOperator assemble_operator(const TransformationFamily& family,
                                     std::span<const double> weights);
void assemble_operator(const TransformationFamily& family,
                       std::span<const double> weights,
                       StochasticOperator& out);

// Stationary distribution q = M q. Solves the linear system directly and
// falls back to a damped power method (repeated squaring) when the solve is
// singular or leaves a residual above tol. The result satisfies
// ||M q - q||_inf <= tol.
MixedAction fixed_point(const StochasticOperator& op, double tol = 1e-10);

struct MatcherConfig {
  LinkFunction link = LinkFunction::polynomial(2.0);
  EstimatorConfig estimator;
  double fixed_point_tolerance = 1e-10;
};

// Everything the last act() computed, for bound evaluation and inspection.
struct StepTrace {
  std::vector<double> exact_weights;  // link(R_{t-1})
  std::vector<double> est_weights;    // link(estimate of R_{t-1})
  double weight_err_l1 = 0.0;         // ||exact_weights - est_weights||_1
  double bound_weight_err_l1 = 0.0;   // same gap under the triple's weight map
  double est_weight_sum = 0.0;
  bool degenerate = false;            // est weights summed to zero, played uniform
};

// Regret-matching learner: links the estimated cumulative regret vector into
// member weights, averages the family under those weights and plays a fixed
// point of the resulting operator. Keeps the exact regret vector alongside
// whatever the estimator reports.
class RegretMatcher : public Learner {
 public:
  RegretMatcher(const RewardSystem& system, TransformationFamily family,
                MatcherConfig config, std::uint64_t estimator_seed);
  ~RegretMatcher() override;

  MixedAction act() override;
  void observe(int action, const RewardFunction& reward) override;
  void reset() override;

  const TransformationFamily& family() const { return family_; }
  const MatcherConfig& config() const { return config_; }
  const CumulativeRegret& exact_regret() const { return exact_; }
  // Estimate used by the last act().
  const CumulativeRegret& estimated_regret() const { return estimated_; }
  const StepTrace& last_trace() const { return trace_; }
  const GordonTriple& triple() const { return triple_; }

 private:
  RewardSystem system_;
  TransformationFamily family_;
  MatcherConfig config_;
  GordonTriple triple_;
  std::unique_ptr<RegretEstimator> estimator_;
  CumulativeRegret exact_;
  CumulativeRegret estimated_;
  StepTrace trace_;
  // Scratch, reused across steps.
  StochasticOperator op_;
  std::vector<double> step_buf_;
  std::vector<double> g_exact_;
  std::vector<double> g_est_;
};

}  // namespace phirm
