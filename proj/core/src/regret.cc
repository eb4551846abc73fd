#include "phirm/regret.h"

#include <algorithm>
#include <stdexcept>

namespace phirm {

namespace {

void check_args(const TransformationFamily& family, const RewardFunction& r,
                std::size_t out_size) {
  if (family.members.empty())
    throw std::invalid_argument("regret: empty family");
  if (static_cast<int>(r.size()) != family.num_actions)
    throw std::invalid_argument("regret: reward arity mismatch");
  if (out_size != family.members.size())
    throw std::invalid_argument("regret: output arity mismatch");
}

}  // namespace

void instantaneous_regret(const TransformationFamily& family, int action,
                          const RewardFunction& r, std::span<double> out) {
  check_args(family, r, out.size());
  if (action < 0 || action >= family.num_actions)
    throw std::invalid_argument("regret: action out of range");
  const double played = r[action];
  for (std::size_t k = 0; k < family.members.size(); ++k) {
    const std::span<const double> col = family.members[k].column(action);
    double v = 0.0;
    for (int i = 0; i < family.num_actions; ++i) v += col[i] * r[i];
    out[k] = v - played;
  }
}

std::vector<double> instantaneous_regret(const TransformationFamily& family,
                                         int action, const RewardFunction& r) {
  std::vector<double> out(family.members.size());
  instantaneous_regret(family, action, r, out);
  return out;
}

void expected_regret(const TransformationFamily& family, const MixedAction& q,
                     const RewardFunction& r, std::span<double> out) {
  check_args(family, r, out.size());
  if (q.size() != family.num_actions)
    throw std::invalid_argument("regret: mixed action arity mismatch");
  double base = 0.0;
  for (int a = 0; a < family.num_actions; ++a) base += q[a] * r[a];
  for (std::size_t k = 0; k < family.members.size(); ++k) {
    const Transformation& phi = family.members[k];
    double v = 0.0;
    for (int a = 0; a < family.num_actions; ++a) {
      const double qa = q[a];
      if (qa == 0.0) continue;
      const std::span<const double> col = phi.column(a);
      double dot = 0.0;
      for (int i = 0; i < family.num_actions; ++i) dot += col[i] * r[i];
      v += qa * dot;
    }
    out[k] = v - base;
  }
}

std::vector<double> expected_regret(const TransformationFamily& family,
                                    const MixedAction& q,
                                    const RewardFunction& r) {
  std::vector<double> out(family.members.size());
  expected_regret(family, q, r, out);
  return out;
}

void accumulate(CumulativeRegret& state, std::span<const double> step) {
  if (step.size() != state.values.size())
    throw std::invalid_argument("accumulate: arity mismatch");
  for (std::size_t k = 0; k < step.size(); ++k) state.values[k] += step[k];
  ++state.t;
}

double realized_objective(const CumulativeRegret& state) {
  if (state.t < 1)
    throw std::invalid_argument("realized_objective: undefined before step 1");
  if (state.values.empty())
    throw std::invalid_argument("realized_objective: empty state");
  const double best = *std::max_element(state.values.begin(), state.values.end());
  return best / static_cast<double>(state.t);
}

}  // namespace phirm
