#include "phirm/bounds.h"

#include <cmath>
#include <stdexcept>

namespace phirm {

BlackwellCheck blackwell_check(const TransformationFamily& family,
                               std::span<const double> exact_weights,
                               const MixedAction& q, const RewardFunction& r,
                               double reward_bound,
                               std::span<const double> est_weights) {
  if (exact_weights.size() != family.members.size() ||
      est_weights.size() != family.members.size())
    throw std::invalid_argument("blackwell_check: weight arity mismatch");
  std::vector<double> expected(family.members.size());
  expected_regret(family, q, r, expected);
  BlackwellCheck out;
  for (std::size_t k = 0; k < expected.size(); ++k)
    out.lhs += exact_weights[k] * expected[k];
  double gap = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k)
    gap += std::abs(exact_weights[k] - est_weights[k]);
  out.rhs = 2.0 * reward_bound * gap;
  out.ok = out.lhs <= out.rhs + 1e-8;
  return out;
}

double theorem_rhs(const LinkFunction& link, double reward_bound,
                   int activation, int family_size, long t,
                   double g_error_sum) {
  if (t < 1) throw std::invalid_argument("theorem_rhs: t must be >= 1");
  if (!(reward_bound > 0.0))
    throw std::invalid_argument("theorem_rhs: reward bound must be positive");
  if (activation < 0 || family_size < 1)
    throw std::invalid_argument("theorem_rhs: bad family shape");
  if (g_error_sum < 0.0)
    throw std::invalid_argument("theorem_rhs: negative error sum");
  const double U = reward_bound;
  const double mu = static_cast<double>(activation);
  const double td = static_cast<double>(t);
  const double err = 2.0 * U * g_error_sum;
  if (link.kind == LinkFunction::Kind::kPolynomial) {
    const double p = link.param;
    if (p > 2.0)
      return std::sqrt(td * (p - 1.0) * U * U * std::pow(mu, 2.0 / p) + err) / td;
    return std::pow(td * std::pow(U, p) * mu + err, 1.0 / p) / td;
  }
  const double eta = link.param;
  return (std::log(static_cast<double>(family_size)) / eta + err) / td +
         0.5 * eta * U * U;
}

BoundTracker::BoundTracker(const LinkFunction& link,
                           const TransformationFamily& family,
                           double reward_bound)
    : triple_(triple_for(link)),
      reward_bound_(reward_bound),
      activation_(maximal_activation(family)),
      family_size_(family.size()),
      curvature_sup_(triple_.curvature_sup(reward_bound, activation_)),
      scratch_(family.size()) {
  const std::vector<double> zeros(family.size(), 0.0);
  potential_zero_ = triple_.potential(zeros);
}

BoundRow BoundTracker::on_step(const RegretMatcher& matcher,
                               const MixedAction& q,
                               const RewardFunction& reward) {
  const StepTrace& trace = matcher.last_trace();
  const CumulativeRegret& exact = matcher.exact_regret();
  if (exact.t < 1)
    throw std::invalid_argument("BoundTracker: call after the matcher observed");

  BoundRow row;
  row.t = exact.t;
  row.realized_objective = realized_objective(exact);

  expected_regret(matcher.family(), q, reward, scratch_);
  double lhs = 0.0;
  for (std::size_t k = 0; k < scratch_.size(); ++k)
    lhs += trace.exact_weights[k] * scratch_[k];
  row.blackwell_lhs = lhs;
  row.blackwell_rhs = 2.0 * reward_bound_ * trace.weight_err_l1;

  g_error_sum_ += trace.bound_weight_err_l1;
  row.g_error_sum = g_error_sum_;
  row.theorem_rhs = theorem_rhs(triple_.link(), reward_bound_, activation_,
                                family_size_, exact.t, g_error_sum_);
  row.potential = triple_.potential(exact.values);
  row.potential_bound = potential_zero_ +
                        static_cast<double>(exact.t) * curvature_sup_ +
                        2.0 * reward_bound_ * g_error_sum_;
  return row;
}

void BoundTracker::reset() { g_error_sum_ = 0.0; }

bool potential_monitor_ok(std::span<const double> avg_potential,
                          std::span<const double> avg_bound, double tol) {
  if (avg_potential.size() != avg_bound.size())
    throw std::invalid_argument("potential_monitor_ok: length mismatch");
  for (std::size_t i = 0; i < avg_potential.size(); ++i)
    if (avg_potential[i] > avg_bound[i] + tol) return false;
  return true;
}

}  // namespace phirm
