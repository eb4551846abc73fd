#pragma once

#include <span>
#include <vector>

#include "phirm/links.h"
#include "phirm/matcher.h"
#include "phirm/odp.h"
#include "phirm/regret.h"
#include "phirm/transforms.h"

namespace phirm {

// One row of the run trace. Column names and order match the CSV schema.
struct BoundRow {
  long t = 0;
  double realized_objective = 0.0;
  double blackwell_lhs = 0.0;
  double blackwell_rhs = 0.0;
  double g_error_sum = 0.0;
  double theorem_rhs = 0.0;
  double potential = 0.0;
  double potential_bound = 0.0;
};

struct BlackwellCheck {
  double lhs = 0.0;  // weights . expected one-step regret of q under r
  double rhs = 0.0;  // 2 U ||exact weights - estimated weights||_1
  bool ok = false;   // lhs <= rhs + 1e-8
};

// Approachability condition of the played point: with exact weights the lhs
// vanishes for every reward function; with estimated weights it is bounded by
// the weight gap term.
BlackwellCheck blackwell_check(const TransformationFamily& family,
                               std::span<const double> exact_weights,
                               const MixedAction& q, const RewardFunction& r,
                               double reward_bound,
                               std::span<const double> est_weights);

// High-probability envelope for the realized objective after t steps, given
// the accumulated weight-map estimation error.
//   polynomial p > 2:    sqrt(t (p-1) U^2 mu^(2/p) + 2 U err) / t
//   polynomial 1 < p <= 2: (t U^p mu + 2 U err)^(1/p) / t
//   exponential:         (ln(size)/eta + 2 U err) / t + eta U^2 / 2
double theorem_rhs(const LinkFunction& link, double reward_bound,
                   int activation, int family_size, long t, double g_error_sum);

// Streams BoundRows out of a RegretMatcher run: call on_step once per step,
// right after the matcher observed the reward. Accumulates the weight-map
// error series and tracks the potential of the exact regret vector against
// its telescoped envelope.
class BoundTracker {
 public:
  BoundTracker(const LinkFunction& link, const TransformationFamily& family,
               double reward_bound);

  BoundRow on_step(const RegretMatcher& matcher, const MixedAction& q,
                   const RewardFunction& reward);
  void reset();

  double g_error_sum() const { return g_error_sum_; }

 private:
  GordonTriple triple_;
  double reward_bound_;
  int activation_;
  int family_size_;
  double curvature_sup_;
  double potential_zero_;
  double g_error_sum_ = 0.0;
  std::vector<double> scratch_;
};

// Seed-averaged potential trace against its averaged envelope.
bool potential_monitor_ok(std::span<const double> avg_potential,
                          std::span<const double> avg_bound, double tol = 1e-6);

}  // namespace phirm
