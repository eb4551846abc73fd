#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "phirm/arena.h"
#include "phirm/bounds.h"
#include "phirm/estimators.h"
#include "phirm/links.h"
#include "phirm/matcher.h"
#include "phirm/transforms.h"

namespace phirm {

// Config file problem (syntax, unknown key, out-of-range value). The message
// carries "<file>:<line>:" context where available.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One experiment: a matcher setup plus either a stock adversary or a
// two-player game, run over a list of seeds. Parsed from a flat
// "key = value" file; see canonical_text() for the full key set.
struct ExperimentConfig {
  int num_actions = 0;  // adversary mode only
  double reward_bound = 1.0;
  FamilyKind family = FamilyKind::kInternal;
  LinkFunction link = LinkFunction::polynomial(2.0);
  EstimatorConfig estimator;
  bool game_mode = false;
  std::string game_path;
  AdversaryKind adversary = AdversaryKind::kIidRandom;
  RewardFunction constant_reward;
  long horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  int jobs = 1;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse(std::istream& in, const std::string& name);

  // Stable, lossless rendering: fixed key order, shortest round-trip
  // numbers. parse(canonical_text()) reproduces the config exactly.
  std::string canonical_text() const;
  // FNV-1a over canonical_text().
  std::uint64_t hash() const;
};

// Everything needed to evaluate the bound columns for one learner.
struct BoundContext {
  LinkFunction link = LinkFunction::polynomial(2.0);
  double reward_bound = 1.0;
  int activation = 0;
  int family_size = 1;
  double potential_zero = 0.0;
  double curvature_sup = 0.0;

  static BoundContext for_family(const LinkFunction& link,
                                 const TransformationFamily& family,
                                 double reward_bound);
  double theorem_rhs_at(long t, double g_error_sum) const;
  double potential_bound_at(long t, double g_error_sum) const;
};

// Streaming seed-order average of same-length traces. theorem_rhs and
// potential_bound of the averaged trace are re-evaluated from the averaged
// error series rather than averaged directly.
class TraceAverager {
 public:
  void add(const std::vector<BoundRow>& rows);
  std::vector<BoundRow> average(const BoundContext& context) const;
  long count() const { return count_; }

 private:
  long count_ = 0;
  std::vector<BoundRow> sums_;
};

// One seed of an experiment, in memory. rows2 is filled in game mode only.
struct SeedRunResult {
  std::vector<BoundRow> rows;
  std::vector<BoundRow> rows2;
};

SeedRunResult run_seed(const ExperimentConfig& config, std::uint64_t seed);
SeedRunResult run_seed(const ExperimentConfig& config, const MatrixGame& game,
                       std::uint64_t seed);

struct RunOutcome {
  int exit_code = 0;  // 0 clean, 1 bound violation
  std::string message;
  std::vector<std::string> files;  // paths written, prefixed with out_dir
};

// Runs every seed (config.jobs workers, merged in seed order), writes
// per-seed CSVs, the averaged CSV, an SVG convergence plot and a JSON
// metadata file into config.out_dir. Returns exit code 1 with a locating
// message if a per-(seed, t) approachability check or a seed-averaged bound
// check fails. Throws std::runtime_error on I/O failure.
RunOutcome run_experiment(const ExperimentConfig& config);

// CSV trace I/O. Schema: header line
//   t,realized_objective,blackwell_lhs,blackwell_rhs,g_error_sum,
//   theorem_rhs,potential,potential_bound
// then one row per step, t counting up from 1.
extern const char kTraceCsvHeader[];
void write_trace_csv(const std::string& path, const std::vector<BoundRow>& rows);
// Throws std::runtime_error with row context on any schema violation.
std::vector<BoundRow> read_trace_csv(const std::string& path);

struct VerifyCheck {
  std::string name;
  bool ok = true;
  long row = 0;  // first offending data row (1-based), 0 if ok
  std::string detail;
};

struct VerifyReport {
  bool schema_ok = false;
  std::string schema_error;
  std::vector<VerifyCheck> checks;

  bool all_ok() const;
};

// Re-validates a written trace from the file alone: schema, approachability
// rows, bound domination rows, potential rows, error-series monotonicity.
VerifyReport verify_trace(const std::string& path);

// Two-series convergence plot (realized objective vs bound), plus the second
// player's objective in game mode.
void write_summary_svg(const std::string& path,
                       const std::vector<BoundRow>& averaged,
                       const std::vector<BoundRow>* averaged2);

}  // namespace phirm
