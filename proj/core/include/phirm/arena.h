#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "phirm/bounds.h"
#include "phirm/matcher.h"
#include "phirm/odp.h"

namespace phirm {

// Two-player bimatrix game with payoffs normalized into [0, reward_bound].
// Loading applies an affine map per player when the raw table leaves the
// range; the applied (scale, shift) pair is recorded for reporting.
struct MatrixGame {
  int rows = 0;  // player 1 actions
  int cols = 0;  // player 2 actions
  std::vector<double> u1;  // row-major rows x cols
  std::vector<double> u2;
  double reward_bound = 1.0;
  double scale1 = 1.0, shift1 = 0.0;
  double scale2 = 1.0, shift2 = 0.0;

  double payoff1(int a1, int a2) const { return u1[a1 * cols + a2]; }
  double payoff2(int a1, int a2) const { return u2[a1 * cols + a2]; }

  // Plain-text format: first line "rows cols", then rows x cols payoffs for
  // player 1, then the same block for player 2. '#' starts a comment.
  static MatrixGame load(const std::string& path, double reward_bound);
  static MatrixGame from_tables(int rows, int cols, std::vector<double> u1,
                                std::vector<double> u2, double reward_bound);
  // Win 1, tie 0.5, loss 0.
  static MatrixGame rock_paper_scissors();
};

// Empirical distribution of joint play.
struct JointEmpirical {
  int rows = 0;
  int cols = 0;
  std::vector<long> counts;  // row-major
  long t = 0;

  JointEmpirical(int rows, int cols)
      : rows(rows), cols(cols),
        counts(static_cast<std::size_t>(rows) * cols, 0) {}
  void add(int a1, int a2) {
    ++counts[a1 * cols + a2];
    ++t;
  }
  double frequency(int a1, int a2) const {
    return t == 0 ? 0.0 : static_cast<double>(counts[a1 * cols + a2]) /
                              static_cast<double>(t);
  }
};

// Largest average payoff gain any player can get by remapping one of their
// recommended actions under the empirical joint distribution, clamped at 0.
double ce_gap(const MatrixGame& game, const JointEmpirical& joint);

// Sub-stream labels used to derive per-component seeds from a run seed.
// Self-play runs use the player-suffixed ones; single-learner runs use the
// first three.
enum : std::uint64_t {
  kStreamSample1 = 0,
  kStreamAdversary = 1,
  kStreamEstimator1 = 2,
  kStreamSample2 = 3,
  kStreamEstimator2 = 4,
};

struct SelfPlayResult {
  std::vector<BoundRow> trace1;
  std::vector<BoundRow> trace2;
  JointEmpirical joint;
  // Joint distribution snapshots taken at the requested step counts.
  std::vector<JointEmpirical> snapshots;
};

// Both players run the same matcher configuration against each other: at
// each step the players draw actions independently, then each observes the
// payoff vector induced by the opponent's sampled action. A player with a
// single action plays it deterministically and reports an all-zero trace.
SelfPlayResult self_play(const MatrixGame& game, const MatcherConfig& config,
                         FamilyKind family, long horizon, std::uint64_t seed,
                         const std::vector<long>& snapshot_times = {});

enum class AdversaryKind {
  kConstant,           // fixed reward vector every step
  kIidRandom,          // entries drawn uniformly from [0, U] each step
  kAlternating,        // U on action (t-1) mod n, 0 elsewhere
  kAdaptiveBestResponse,  // U on the least-sampled action so far
};

// Builds one of the stock reward streams. `constant` is required (and only
// read) for kConstant.
std::unique_ptr<Adversary> make_adversary(AdversaryKind kind,
                                          const RewardSystem& system,
                                          std::uint64_t seed,
                                          const RewardFunction& constant = {});

// Replays a fixed list of reward functions, then repeats from the start.
class FixedSequenceAdversary : public Adversary {
 public:
  explicit FixedSequenceAdversary(std::vector<RewardFunction> sequence);
  RewardFunction next_reward(const History& past) override;
  void reset() override { pos_ = 0; }

 private:
  std::vector<RewardFunction> sequence_;
  std::size_t pos_ = 0;
};

}  // namespace phirm
