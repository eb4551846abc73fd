#pragma once

#include <span>
#include <vector>

#include "phirm/odp.h"
#include "phirm/transforms.h"

namespace phirm {

// Regret accumulated against every member of one transformation family,
// indexed in the family's canonical member order.
struct CumulativeRegret {
  std::vector<double> values;
  long t = 0;  // number of accumulated steps

  explicit CumulativeRegret(int family_size = 0)
      : values(family_size, 0.0) {}
};

// Per-member one-step regret of having played `action` under reward r:
// phi(action) . r - r(action).
void instantaneous_regret(const TransformationFamily& family, int action,
                          const RewardFunction& r, std::span<double> out);
std::vector<double> instantaneous_regret(const TransformationFamily& family,
                                         int action, const RewardFunction& r);

// Expectation of the above when the action is drawn from q:
// r . [phi](q) - r . q per member.
void expected_regret(const TransformationFamily& family, const MixedAction& q,
                     const RewardFunction& r, std::span<double> out);
std::vector<double> expected_regret(const TransformationFamily& family,
                                    const MixedAction& q,
                                    const RewardFunction& r);

// state += step, componentwise; increments state.t.
void accumulate(CumulativeRegret& state, std::span<const double> step);

// max over members of state.values, divided by state.t. Requires t >= 1.
double realized_objective(const CumulativeRegret& state);

}  // namespace phirm
