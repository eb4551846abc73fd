#include "phirm/arena.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phirm {

namespace {

// Affine map of a payoff table into [0, U]. Constant tables land on U/2.
void normalize_table(std::vector<double>& u, double U, double& scale,
                     double& shift) {
  double lo = u.front(), hi = u.front();
  for (double v : u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo >= 0.0 && hi <= U) {
    scale = 1.0;
    shift = 0.0;
    return;
  }
  if (hi > lo) {
    scale = U / (hi - lo);
    shift = -lo * scale;
  } else {
    scale = 0.0;
    shift = 0.5 * U;
  }
  for (double& v : u) v = std::clamp(scale * v + shift, 0.0, U);
}

class IidRandomAdversary final : public Adversary {
 public:
  IidRandomAdversary(const RewardSystem& system, std::uint64_t seed)
      : system_(system), seed_(seed), rng_(seed) {}
  RewardFunction next_reward(const History&) override {
    RewardFunction r(system_.num_actions);
    for (double& v : r) v = system_.reward_bound * next_unit(rng_);
    return r;
  }
  void reset() override { rng_.seed(seed_); }

 private:
  RewardSystem system_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

class ConstantAdversary final : public Adversary {
 public:
  explicit ConstantAdversary(RewardFunction constant)
      : constant_(std::move(constant)) {}
  RewardFunction next_reward(const History&) override { return constant_; }
  void reset() override {}

 private:
  RewardFunction constant_;
};

class AlternatingAdversary final : public Adversary {
 public:
  explicit AlternatingAdversary(const RewardSystem& system) : system_(system) {}
  RewardFunction next_reward(const History& past) override {
    RewardFunction r(system_.num_actions, 0.0);
    r[past.length() % system_.num_actions] = system_.reward_bound;
    return r;
  }
  void reset() override {}

 private:
  RewardSystem system_;
};

// Pays U on the action the learner has sampled least often so far (ties to
// the lowest index), which keeps steering reward toward where the learner is
// not. Counts are maintained incrementally across calls.
class AdaptiveBestResponseAdversary final : public Adversary {
 public:
  explicit AdaptiveBestResponseAdversary(const RewardSystem& system)
      : system_(system), counts_(system.num_actions, 0) {}
  RewardFunction next_reward(const History& past) override {
    while (seen_ < past.length()) {
      ++counts_[past.step(seen_).action];
      ++seen_;
    }
    int target = 0;
    for (int a = 1; a < system_.num_actions; ++a)
      if (counts_[a] < counts_[target]) target = a;
    RewardFunction r(system_.num_actions, 0.0);
    r[target] = system_.reward_bound;
    return r;
  }
  void reset() override {
    std::fill(counts_.begin(), counts_.end(), 0L);
    seen_ = 0;
  }

 private:
  RewardSystem system_;
  std::vector<long> counts_;
  long seen_ = 0;
};

}  // namespace

MatrixGame MatrixGame::from_tables(int rows, int cols, std::vector<double> u1,
                                   std::vector<double> u2,
                                   double reward_bound) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("MatrixGame: dimensions must be >= 1");
  if (!(reward_bound > 0.0))
    throw std::invalid_argument("MatrixGame: reward bound must be positive");
  const std::size_t want = static_cast<std::size_t>(rows) * cols;
  if (u1.size() != want || u2.size() != want)
    throw std::invalid_argument("MatrixGame: payoff table size mismatch");
  for (double v : u1)
    if (!std::isfinite(v))
      throw std::invalid_argument("MatrixGame: nonfinite payoff");
  for (double v : u2)
    if (!std::isfinite(v))
      throw std::invalid_argument("MatrixGame: nonfinite payoff");
  MatrixGame g;
  g.rows = rows;
  g.cols = cols;
  g.u1 = std::move(u1);
  g.u2 = std::move(u2);
  g.reward_bound = reward_bound;
  normalize_table(g.u1, reward_bound, g.scale1, g.shift1);
  normalize_table(g.u2, reward_bound, g.scale2, g.shift2);
  return g;
}

MatrixGame MatrixGame::load(const std::string& path, double reward_bound) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("MatrixGame: cannot open " + path);
  std::vector<double> numbers;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v;
    while (ls >> v) numbers.push_back(v);
    if (!ls.eof()) {
      ls.clear();
      std::string token;
      ls >> token;
      throw std::runtime_error("MatrixGame: bad token '" + token + "' in " + path);
    }
  }
  if (numbers.size() < 2)
    throw std::runtime_error("MatrixGame: missing dimensions in " + path);
  const double rd = numbers[0], cd = numbers[1];
  if (rd != std::floor(rd) || cd != std::floor(cd) || rd < 1 || cd < 1)
    throw std::runtime_error("MatrixGame: bad dimensions in " + path);
  const int rows = static_cast<int>(rd), cols = static_cast<int>(cd);
  const std::size_t want = static_cast<std::size_t>(rows) * cols;
  if (numbers.size() != 2 + 2 * want)
    throw std::runtime_error("MatrixGame: expected " +
                             std::to_string(2 + 2 * want) + " numbers in " +
                             path + ", got " + std::to_string(numbers.size()));
  std::vector<double> u1(numbers.begin() + 2, numbers.begin() + 2 + want);
  std::vector<double> u2(numbers.begin() + 2 + want, numbers.end());
  return from_tables(rows, cols, std::move(u1), std::move(u2), reward_bound);
}

MatrixGame MatrixGame::rock_paper_scissors() {
  // u1[i][j]: i beats j -> 1, tie -> 0.5, loss -> 0.
  std::vector<double> u1(9), u2(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = 0.5;
      if ((i - j + 3) % 3 == 1) v = 1.0;
      if ((j - i + 3) % 3 == 1) v = 0.0;
      u1[i * 3 + j] = v;
      u2[i * 3 + j] = 1.0 - v;
    }
  return from_tables(3, 3, std::move(u1), std::move(u2), 1.0);
}

double ce_gap(const MatrixGame& game, const JointEmpirical& joint) {
  if (joint.rows != game.rows || joint.cols != game.cols)
    throw std::invalid_argument("ce_gap: joint/game shape mismatch");
  if (joint.t == 0) throw std::invalid_argument("ce_gap: empty joint");
  double best = 0.0;
  for (int a = 0; a < game.rows; ++a)
    for (int b = 0; b < game.rows; ++b) {
      if (a == b) continue;
      double gain = 0.0;
      for (int o = 0; o < game.cols; ++o)
        gain += joint.frequency(a, o) * (game.payoff1(b, o) - game.payoff1(a, o));
      best = std::max(best, gain);
    }
  for (int a = 0; a < game.cols; ++a)
    for (int b = 0; b < game.cols; ++b) {
      if (a == b) continue;
      double gain = 0.0;
      for (int o = 0; o < game.rows; ++o)
        gain += joint.frequency(o, a) * (game.payoff2(o, b) - game.payoff2(o, a));
      best = std::max(best, gain);
    }
  return best;
}

SelfPlayResult self_play(const MatrixGame& game, const MatcherConfig& config,
                         FamilyKind family, long horizon, std::uint64_t seed,
                         const std::vector<long>& snapshot_times) {
  if (horizon < 1) throw std::invalid_argument("self_play: horizon must be >= 1");
  const double U = game.reward_bound;

  // A single-action player has nothing to learn; model it as a null matcher.
  const bool active1 = game.rows >= 2;
  const bool active2 = game.cols >= 2;
  std::unique_ptr<RegretMatcher> m1, m2;
  std::unique_ptr<BoundTracker> tr1, tr2;
  if (active1) {
    const RewardSystem sys1(game.rows, U);
    m1 = std::make_unique<RegretMatcher>(
        sys1, build_family(family, game.rows), config,
        substream_seed(seed, kStreamEstimator1));
    tr1 = std::make_unique<BoundTracker>(config.link, m1->family(), U);
  }
  if (active2) {
    const RewardSystem sys2(game.cols, U);
    m2 = std::make_unique<RegretMatcher>(
        sys2, build_family(family, game.cols), config,
        substream_seed(seed, kStreamEstimator2));
    tr2 = std::make_unique<BoundTracker>(config.link, m2->family(), U);
  }

  std::mt19937_64 rng1(substream_seed(seed, kStreamSample1));
  std::mt19937_64 rng2(substream_seed(seed, kStreamSample2));

  SelfPlayResult result{{}, {}, JointEmpirical(game.rows, game.cols), {}};
  result.trace1.reserve(active1 ? horizon : 0);
  result.trace2.reserve(active2 ? horizon : 0);
  std::vector<long> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  RewardFunction r1(game.rows), r2(game.cols);
  std::size_t next_snap = 0;
  for (long t = 1; t <= horizon; ++t) {
    int a1 = 0, a2 = 0;
    MixedAction q1 = active1 ? m1->act() : MixedAction::delta(1, 0);
    MixedAction q2 = active2 ? m2->act() : MixedAction::delta(1, 0);
    if (active1) a1 = sample_action(q1, rng1);
    if (active2) a2 = sample_action(q2, rng2);
    for (int x = 0; x < game.rows; ++x) r1[x] = game.payoff1(x, a2);
    for (int x = 0; x < game.cols; ++x) r2[x] = game.payoff2(a1, x);
    if (active1) {
      m1->observe(a1, r1);
      BoundRow row = tr1->on_step(*m1, q1, r1);
      result.trace1.push_back(row);
    } else {
      result.trace1.push_back(BoundRow{t, 0, 0, 0, 0, 0, 0, 0});
    }
    if (active2) {
      m2->observe(a2, r2);
      BoundRow row = tr2->on_step(*m2, q2, r2);
      result.trace2.push_back(row);
    } else {
      result.trace2.push_back(BoundRow{t, 0, 0, 0, 0, 0, 0, 0});
    }
    result.joint.add(a1, a2);
    while (next_snap < snaps.size() && snaps[next_snap] == t) {
      result.snapshots.push_back(result.joint);
      ++next_snap;
    }
  }
  return result;
}

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind,
                                          const RewardSystem& system,
                                          std::uint64_t seed,
                                          const RewardFunction& constant) {
  switch (kind) {
    case AdversaryKind::kConstant: {
      RewardFunction r = constant;
      validate_reward(system, r);
      return std::make_unique<ConstantAdversary>(std::move(r));
    }
    case AdversaryKind::kIidRandom:
      return std::make_unique<IidRandomAdversary>(system, seed);
    case AdversaryKind::kAlternating:
      return std::make_unique<AlternatingAdversary>(system);
    case AdversaryKind::kAdaptiveBestResponse:
      return std::make_unique<AdaptiveBestResponseAdversary>(system);
  }
  throw std::invalid_argument("make_adversary: unknown adversary kind");
}

FixedSequenceAdversary::FixedSequenceAdversary(
    std::vector<RewardFunction> sequence)
    : sequence_(std::move(sequence)) {
  if (sequence_.empty())
    throw std::invalid_argument("FixedSequenceAdversary: empty sequence");
}

RewardFunction FixedSequenceAdversary::next_reward(const History&) {
  RewardFunction r = sequence_[pos_];
  pos_ = (pos_ + 1) % sequence_.size();
  return r;
}

}  // namespace phirm
