#include "phirm/odp.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phirm {

RewardSystem::RewardSystem(int num_actions, double reward_bound)
    : num_actions(num_actions), reward_bound(reward_bound) {
  if (num_actions < 2)
    throw std::invalid_argument("RewardSystem: num_actions must be >= 2");
  if (!(reward_bound > 0.0) || !std::isfinite(reward_bound))
    throw std::invalid_argument("RewardSystem: reward_bound must be positive");
}

void validate_reward(const RewardSystem& system, const RewardFunction& r) {
  if (static_cast<int>(r.size()) != system.num_actions)
    throw std::out_of_range("reward: expected " +
                            std::to_string(system.num_actions) + " entries, got " +
                            std::to_string(r.size()));
  for (double v : r) {
    if (!std::isfinite(v) || v < 0.0 || v > system.reward_bound)
      throw std::out_of_range("reward: entry " + std::to_string(v) +
                              " outside [0, " +
                              std::to_string(system.reward_bound) + "]");
  }
}

MixedAction::MixedAction(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty())
    throw std::invalid_argument("MixedAction: empty distribution");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("MixedAction: entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("MixedAction: entries sum to " +
                                std::to_string(sum) + ", expected 1");
}

MixedAction MixedAction::uniform(int num_actions) {
  if (num_actions < 1)
    throw std::invalid_argument("MixedAction::uniform: num_actions must be >= 1");
  return MixedAction(
      std::vector<double>(num_actions, 1.0 / static_cast<double>(num_actions)));
}

MixedAction MixedAction::delta(int num_actions, int action) {
  if (num_actions < 1 || action < 0 || action >= num_actions)
    throw std::invalid_argument("MixedAction::delta: action out of range");
  std::vector<double> p(num_actions, 0.0);
  p[action] = 1.0;
  return MixedAction(std::move(p));
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 of (seed, stream); scrambles even adjacent seeds apart.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int sample_action(const MixedAction& q, std::mt19937_64& rng) {
  const double u = next_unit(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) last_positive = i;
    acc += q[i];
    if (u < acc) return i;
  }
  // Rounding may leave acc marginally below 1; fall back to the last atom.
  return last_positive;
}

void History::append(int action, RewardFunction reward) {
  steps_.push_back(Step{action, std::move(reward)});
}

void run_odp(Learner& learner, Adversary& adversary, const RewardSystem& system,
             long horizon, std::uint64_t sample_seed,
             const std::function<void(const MatchRecord&)>& sink) {
  if (horizon < 1) throw std::invalid_argument("run_odp: horizon must be >= 1");
  std::mt19937_64 rng(sample_seed);
  History history;
  for (long t = 1; t <= horizon; ++t) {
    MixedAction q = learner.act();
    if (q.size() != system.num_actions)
      throw std::invalid_argument("run_odp: learner produced an action of arity " +
                                  std::to_string(q.size()));
    const int a = sample_action(q, rng);
    RewardFunction r = adversary.next_reward(history);
    validate_reward(system, r);
    learner.observe(a, r);
    history.append(a, r);
    if (sink) sink(MatchRecord{t, std::move(q), a, std::move(r)});
  }
}

std::vector<MatchRecord> run_odp(Learner& learner, Adversary& adversary,
                                 const RewardSystem& system, long horizon,
                                 std::uint64_t sample_seed) {
  std::vector<MatchRecord> records;
  records.reserve(static_cast<std::size_t>(horizon > 0 ? horizon : 0));
  run_odp(learner, adversary, system, horizon, sample_seed,
          [&records](const MatchRecord& rec) { records.push_back(rec); });
  return records;
}

}  // namespace phirm
