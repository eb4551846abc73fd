#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace phirm {

// Action set plus reward range. Every reward observed during a run must lie
// in [0, reward_bound].
struct RewardSystem {
  int num_actions;
  double reward_bound;

  RewardSystem(int num_actions, double reward_bound);
};

// Dense reward vector over actions.
using RewardFunction = std::vector<double>;

// Throws std::out_of_range if r has the wrong arity or an entry outside
// [0, reward_bound].
void validate_reward(const RewardSystem& system, const RewardFunction& r);

// Probability distribution over actions. Entries are nonnegative and sum to
// one within 1e-9; both are enforced at construction.
class MixedAction {
 public:
  explicit MixedAction(std::vector<double> probs);
  static MixedAction uniform(int num_actions);
  static MixedAction delta(int num_actions, int action);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Canonical 53-bit uniform draw in [0, 1).
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Derives the seed of a named sub-stream (action sampling, adversary,
// estimator, ...) from a run seed. Distinct streams decouple the consumers,
// so adding draws to one never perturbs another.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

// Draws an action index distributed according to q by inverse CDF walk.
int sample_action(const MixedAction& q, std::mt19937_64& rng);

// Append-only record of play: one (sampled action, reward function) pair per
// completed step.
class History {
 public:
  struct Step {
    int action;
    RewardFunction reward;
  };

  void append(int action, RewardFunction reward);
  long length() const { return static_cast<long>(steps_.size()); }
  const Step& step(long t) const { return steps_[t]; }  // 0-based
  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

// Online learner. act() proposes the mixed action for the current step from
// everything observed so far; observe() feeds back the sampled action and the
// full reward function.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual MixedAction act() = 0;
  virtual void observe(int action, const RewardFunction& reward) = 0;
  virtual void reset() = 0;
};

// Reward stream. next_reward may inspect the past (sampled actions and reward
// functions up to the previous step) but never the current step's action.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual RewardFunction next_reward(const History& past) = 0;
  virtual void reset() = 0;
};

class UniformLearner : public Learner {
 public:
  explicit UniformLearner(const RewardSystem& system)
      : num_actions_(system.num_actions) {}
  MixedAction act() override { return MixedAction::uniform(num_actions_); }
  void observe(int, const RewardFunction&) override {}
  void reset() override {}

 private:
  int num_actions_;
};

// Adversary driven by a plain function of the history.
class CallbackAdversary : public Adversary {
 public:
  using Fn = std::function<RewardFunction(const History&)>;
  explicit CallbackAdversary(Fn fn) : fn_(std::move(fn)) {}
  RewardFunction next_reward(const History& past) override { return fn_(past); }
  void reset() override {}

 private:
  Fn fn_;
};

// One completed step of a run.
struct MatchRecord {
  long t;  // 1-based
  MixedAction q;
  int action;
  RewardFunction reward;
};

// Runs the online protocol for `horizon` steps. Per step: the learner
// proposes q_t, an action is sampled from q_t, the adversary (shown only the
// history up to t-1) reveals the reward function, the learner observes both.
// Throws std::invalid_argument for horizon < 1 or a learner action of the
// wrong arity, std::out_of_range for rewards outside the system's range.
void run_odp(Learner& learner, Adversary& adversary, const RewardSystem& system,
             long horizon, std::uint64_t sample_seed,
             const std::function<void(const MatchRecord&)>& sink);

std::vector<MatchRecord> run_odp(Learner& learner, Adversary& adversary,
                                 const RewardSystem& system, long horizon,
                                 std::uint64_t sample_seed);

}  // namespace phirm
