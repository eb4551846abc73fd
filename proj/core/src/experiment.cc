#include "phirm/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace phirm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void fail(const std::string& name, long line,
                       const std::string& msg) {
  if (line > 0)
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
  throw ConfigError(name + ": " + msg);
}

struct RawValue {
  std::string text;
  long line = 0;
};

class KeyTable {
 public:
  KeyTable(std::map<std::string, RawValue> values, std::string name)
      : values_(std::move(values)), name_(std::move(name)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  RawValue require(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end())
      fail(name_, 0, "missing required key '" + key + "'");
    RawValue v = it->second;
    values_.erase(it);
    return v;
  }

  bool take(const std::string& key, RawValue& out) {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    out = it->second;
    values_.erase(it);
    return true;
  }

  void forbid(const std::string& key, const std::string& why) {
    auto it = values_.find(key);
    if (it != values_.end()) fail(name_, it->second.line, "'" + key + "' " + why);
  }

  void finish() const {
    if (values_.empty()) return;
    const auto& [key, value] = *values_.begin();
    fail(name_, value.line, "unknown key '" + key + "'");
  }

  const std::string& name() const { return name_; }

 private:
  std::map<std::string, RawValue> values_;
  std::string name_;
};

long parse_long(const std::string& name, const RawValue& v,
                const std::string& key) {
  long out = 0;
  const char* first = v.text.data();
  const char* last = v.text.data() + v.text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last)
    fail(name, v.line, key + ": not an integer: '" + v.text + "'");
  return out;
}

double parse_num(const std::string& name, const RawValue& v,
                 const std::string& key) {
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = v.text.data() + v.text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out))
    fail(name, v.line, key + ": not a number: '" + v.text + "'");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& name,
                                       const RawValue& v) {
  std::vector<std::uint64_t> seeds;
  const std::size_t dots = v.text.find("..");
  auto one = [&](const std::string& tok) {
    std::uint64_t s = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, s);
    if (res.ec != std::errc() || res.ptr != last)
      fail(name, v.line, "seeds: bad seed '" + tok + "'");
    return s;
  };
  if (dots != std::string::npos) {
    const std::uint64_t lo = one(trim(v.text.substr(0, dots)));
    const std::uint64_t hi = one(trim(v.text.substr(dots + 2)));
    if (hi < lo) fail(name, v.line, "seeds: empty range");
    if (hi - lo > 100000) fail(name, v.line, "seeds: range too large");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (const std::string& tok : split(v.text, ','))
      seeds.push_back(one(tok));
  }
  if (seeds.empty()) fail(name, v.line, "seeds: empty list");
  return seeds;
}

const std::map<std::string, FamilyKind> kFamilyNames = {
    {"ext", FamilyKind::kExternal},
    {"int", FamilyKind::kInternal},
    {"swap", FamilyKind::kSwap}};

const std::map<std::string, EstimatorConfig::Kind> kEstimatorNames = {
    {"exact", EstimatorConfig::Kind::kExact},
    {"noisy", EstimatorConfig::Kind::kNoisy},
    {"quantized", EstimatorConfig::Kind::kQuantized},
    {"linear", EstimatorConfig::Kind::kLinear}};

const std::map<std::string, AdversaryKind> kAdversaryNames = {
    {"constant", AdversaryKind::kConstant},
    {"iid_random", AdversaryKind::kIidRandom},
    {"alternating", AdversaryKind::kAlternating},
    {"adaptive_best_response", AdversaryKind::kAdaptiveBestResponse}};

template <typename T>
T parse_enum(const std::string& name, const RawValue& v, const std::string& key,
             const std::map<std::string, T>& table) {
  const auto it = table.find(v.text);
  if (it == table.end()) {
    std::string options;
    for (const auto& [k, _] : table) {
      if (!options.empty()) options += " | ";
      options += k;
    }
    fail(name, v.line, key + ": unknown value '" + v.text + "' (expected " +
                           options + ")");
  }
  return it->second;
}

template <typename T>
std::string enum_name(T value, const std::map<std::string, T>& table) {
  for (const auto& [k, v] : table)
    if (v == value) return k;
  return "?";
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in,
                                         const std::string& name) {
  std::map<std::string, RawValue> raw;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(name, line_no, "expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(name, line_no, "empty key");
    if (value.empty()) fail(name, line_no, "empty value for key '" + key + "'");
    if (raw.count(key))
      fail(name, line_no, "duplicate key '" + key + "' (first at line " +
                              std::to_string(raw[key].line) + ")");
    raw[key] = RawValue{value, line_no};
  }

  KeyTable table(std::move(raw), name);
  ExperimentConfig cfg;

  RawValue v;
  if (table.take("reward_bound", v)) {
    cfg.reward_bound = parse_num(name, v, "reward_bound");
    if (!(cfg.reward_bound > 0.0))
      fail(name, v.line, "reward_bound: must be > 0");
  }

  cfg.family = parse_enum(name, table.require("family"), "family", kFamilyNames);

  {
    const RawValue lk = table.require("link");
    const RawValue lp = table.require("link_param");
    const double param = parse_num(name, lp, "link_param");
    if (lk.text == "poly") {
      if (!(param > 1.0))
        fail(name, lp.line, "link_param: must be > 1 for link = poly");
      cfg.link = LinkFunction::polynomial(param);
    } else if (lk.text == "exp") {
      if (!(param > 0.0))
        fail(name, lp.line, "link_param: must be > 0 for link = exp");
      cfg.link = LinkFunction::exponential(param);
    } else {
      fail(name, lk.line, "link: unknown value '" + lk.text +
                              "' (expected poly | exp)");
    }
  }

  cfg.estimator = EstimatorConfig{};
  if (table.take("estimator", v))
    cfg.estimator.kind = parse_enum(name, v, "estimator", kEstimatorNames);
  switch (cfg.estimator.kind) {
    case EstimatorConfig::Kind::kExact:
      table.forbid("noise_scale", "is only valid for estimator = noisy");
      table.forbid("quantum", "is only valid for estimator = quantized");
      table.forbid("learning_rate", "is only valid for estimator = linear");
      table.forbid("projection_rank", "is only valid for estimator = linear");
      break;
    case EstimatorConfig::Kind::kNoisy: {
      const RawValue ns = table.require("noise_scale");
      cfg.estimator.noise_scale = parse_num(name, ns, "noise_scale");
      if (cfg.estimator.noise_scale < 0.0)
        fail(name, ns.line, "noise_scale: must be >= 0");
      table.forbid("quantum", "is only valid for estimator = quantized");
      table.forbid("learning_rate", "is only valid for estimator = linear");
      table.forbid("projection_rank", "is only valid for estimator = linear");
      break;
    }
    case EstimatorConfig::Kind::kQuantized: {
      const RawValue qv = table.require("quantum");
      cfg.estimator.quantum = parse_num(name, qv, "quantum");
      if (!(cfg.estimator.quantum > 0.0))
        fail(name, qv.line, "quantum: must be > 0");
      table.forbid("noise_scale", "is only valid for estimator = noisy");
      table.forbid("learning_rate", "is only valid for estimator = linear");
      table.forbid("projection_rank", "is only valid for estimator = linear");
      break;
    }
    case EstimatorConfig::Kind::kLinear: {
      if (table.take("learning_rate", v)) {
        cfg.estimator.learning_rate = parse_num(name, v, "learning_rate");
        if (!(cfg.estimator.learning_rate > 0.0))
          fail(name, v.line, "learning_rate: must be > 0");
      }
      if (table.take("projection_rank", v)) {
        const long rank = parse_long(name, v, "projection_rank");
        if (rank < 0) fail(name, v.line, "projection_rank: must be >= 0");
        cfg.estimator.projection_rank = static_cast<int>(rank);
      }
      table.forbid("noise_scale", "is only valid for estimator = noisy");
      table.forbid("quantum", "is only valid for estimator = quantized");
      break;
    }
  }

  cfg.game_mode = table.has("game");
  if (cfg.game_mode) {
    cfg.game_path = table.require("game").text;
    table.forbid("actions", "is not valid in game mode (sizes come from the game)");
    table.forbid("adversary", "is not valid in game mode");
    table.forbid("constant_reward", "is not valid in game mode");
  } else {
    const RawValue av = table.require("actions");
    const long n = parse_long(name, av, "actions");
    if (n < 2) fail(name, av.line, "actions: must be >= 2");
    if (cfg.family == FamilyKind::kSwap && n > 6)
      fail(name, av.line, "actions: swap family supports at most 6 actions");
    cfg.num_actions = static_cast<int>(n);
    const RawValue ad = table.require("adversary");
    cfg.adversary = parse_enum(name, ad, "adversary", kAdversaryNames);
    if (cfg.adversary == AdversaryKind::kConstant) {
      const RawValue cr = table.require("constant_reward");
      for (const std::string& tok : split(cr.text, ','))
        cfg.constant_reward.push_back(parse_num(
            name, RawValue{tok, cr.line}, "constant_reward"));
      if (static_cast<int>(cfg.constant_reward.size()) != cfg.num_actions)
        fail(name, cr.line, "constant_reward: expected " +
                                std::to_string(cfg.num_actions) + " entries");
      for (double r : cfg.constant_reward)
        if (r < 0.0 || r > cfg.reward_bound)
          fail(name, cr.line, "constant_reward: entry outside [0, reward_bound]");
    } else {
      table.forbid("constant_reward", "is only valid for adversary = constant");
    }
  }

  {
    const RawValue hv = table.require("horizon");
    cfg.horizon = parse_long(name, hv, "horizon");
    if (cfg.horizon < 1) fail(name, hv.line, "horizon: must be >= 1");
  }
  cfg.seeds = parse_seeds(name, table.require("seeds"));

  if (table.take("out", v)) cfg.out_dir = v.text;
  if (table.take("jobs", v)) {
    const long jobs = parse_long(name, v, "jobs");
    if (jobs < 1) fail(name, v.line, "jobs: must be >= 1");
    cfg.jobs = static_cast<int>(jobs);
  }

  table.finish();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse(in, path);
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  out << "family = " << enum_name(family, kFamilyNames) << "\n";
  out << "link = "
      << (link.kind == LinkFunction::Kind::kPolynomial ? "poly" : "exp")
      << "\n";
  out << "link_param = " << format_double(link.param) << "\n";
  out << "reward_bound = " << format_double(reward_bound) << "\n";
  out << "estimator = " << enum_name(estimator.kind, kEstimatorNames) << "\n";
  switch (estimator.kind) {
    case EstimatorConfig::Kind::kExact:
      break;
    case EstimatorConfig::Kind::kNoisy:
      out << "noise_scale = " << format_double(estimator.noise_scale) << "\n";
      break;
    case EstimatorConfig::Kind::kQuantized:
      out << "quantum = " << format_double(estimator.quantum) << "\n";
      break;
    case EstimatorConfig::Kind::kLinear:
      out << "learning_rate = " << format_double(estimator.learning_rate)
          << "\n";
      out << "projection_rank = " << estimator.projection_rank << "\n";
      break;
  }
  if (game_mode) {
    out << "game = " << game_path << "\n";
  } else {
    out << "actions = " << num_actions << "\n";
    out << "adversary = " << enum_name(adversary, kAdversaryNames) << "\n";
    if (adversary == AdversaryKind::kConstant) {
      out << "constant_reward = ";
      for (std::size_t i = 0; i < constant_reward.size(); ++i) {
        if (i) out << ",";
        out << format_double(constant_reward[i]);
      }
      out << "\n";
    }
  }
  out << "horizon = " << horizon << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out << ",";
    out << seeds[i];
  }
  out << "\n";
  out << "jobs = " << jobs << "\n";
  out << "out = " << out_dir << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

BoundContext BoundContext::for_family(const LinkFunction& link,
                                      const TransformationFamily& family,
                                      double reward_bound) {
  const GordonTriple triple = triple_for(link);
  BoundContext ctx;
  ctx.link = link;
  ctx.reward_bound = reward_bound;
  ctx.activation = maximal_activation(family);
  ctx.family_size = family.size();
  const std::vector<double> zeros(family.size(), 0.0);
  ctx.potential_zero = triple.potential(zeros);
  ctx.curvature_sup = triple.curvature_sup(reward_bound, ctx.activation);
  return ctx;
}

double BoundContext::theorem_rhs_at(long t, double g_error_sum) const {
  return theorem_rhs(link, reward_bound, activation, family_size, t,
                     g_error_sum);
}

double BoundContext::potential_bound_at(long t, double g_error_sum) const {
  return potential_zero + static_cast<double>(t) * curvature_sup +
         2.0 * reward_bound * g_error_sum;
}

void TraceAverager::add(const std::vector<BoundRow>& rows) {
  if (count_ == 0) {
    sums_.assign(rows.size(), BoundRow{});
    for (std::size_t i = 0; i < rows.size(); ++i) sums_[i].t = rows[i].t;
  }
  if (rows.size() != sums_.size())
    throw std::invalid_argument("TraceAverager: trace length mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].t != sums_[i].t)
      throw std::invalid_argument("TraceAverager: step index mismatch");
    sums_[i].realized_objective += rows[i].realized_objective;
    sums_[i].blackwell_lhs += rows[i].blackwell_lhs;
    sums_[i].blackwell_rhs += rows[i].blackwell_rhs;
    sums_[i].g_error_sum += rows[i].g_error_sum;
    sums_[i].theorem_rhs += rows[i].theorem_rhs;
    sums_[i].potential += rows[i].potential;
    sums_[i].potential_bound += rows[i].potential_bound;
  }
  ++count_;
}

std::vector<BoundRow> TraceAverager::average(const BoundContext& context) const {
  if (count_ == 0) throw std::invalid_argument("TraceAverager: no traces");
  std::vector<BoundRow> out = sums_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (BoundRow& r : out) {
    r.realized_objective *= inv;
    r.blackwell_lhs *= inv;
    r.blackwell_rhs *= inv;
    r.g_error_sum *= inv;
    r.potential *= inv;
    // Bound columns are re-evaluated at the averaged error series; for the
    // theorem envelope that is the form the expectation bound takes.
    if (context.family_size > 0 && context.reward_bound > 0.0) {
      r.theorem_rhs = context.theorem_rhs_at(r.t, r.g_error_sum);
      r.potential_bound = context.potential_bound_at(r.t, r.g_error_sum);
    } else {
      r.theorem_rhs *= inv;
      r.potential_bound *= inv;
    }
  }
  return out;
}

SeedRunResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.game_mode) {
    const MatrixGame game =
        MatrixGame::load(config.game_path, config.reward_bound);
    return run_seed(config, game, seed);
  }
  const RewardSystem system(config.num_actions, config.reward_bound);
  TransformationFamily family = build_family(config.family, config.num_actions);
  MatcherConfig mcfg;
  mcfg.link = config.link;
  mcfg.estimator = config.estimator;
  RegretMatcher matcher(system, std::move(family), mcfg,
                        substream_seed(seed, kStreamEstimator1));
  std::unique_ptr<Adversary> adversary =
      make_adversary(config.adversary, system,
                     substream_seed(seed, kStreamAdversary),
                     config.constant_reward);
  BoundTracker tracker(config.link, matcher.family(), config.reward_bound);

  SeedRunResult result;
  result.rows.reserve(config.horizon);
  run_odp(matcher, *adversary, system, config.horizon,
          substream_seed(seed, kStreamSample1),
          [&](const MatchRecord& rec) {
            result.rows.push_back(tracker.on_step(matcher, rec.q, rec.reward));
          });
  return result;
}

SeedRunResult run_seed(const ExperimentConfig& config, const MatrixGame& game,
                       std::uint64_t seed) {
  MatcherConfig mcfg;
  mcfg.link = config.link;
  mcfg.estimator = config.estimator;
  SelfPlayResult sp =
      self_play(game, mcfg, config.family, config.horizon, seed);
  SeedRunResult result;
  result.rows = std::move(sp.trace1);
  result.rows2 = std::move(sp.trace2);
  return result;
}

namespace {

struct Violation {
  std::string kind;
  std::string where;  // seed or "seed-average"
  long t = 0;
  int player = 0;  // 0 = single learner
  double lhs = 0.0, rhs = 0.0;
};

void scan_blackwell(const std::vector<BoundRow>& rows, std::uint64_t seed,
                    int player, std::vector<Violation>& out) {
  if (!out.empty()) return;  // keep the first violation only
  for (const BoundRow& r : rows) {
    if (r.blackwell_lhs > r.blackwell_rhs + 1e-8) {
      out.push_back(Violation{"approachability", std::to_string(seed), r.t,
                              player, r.blackwell_lhs, r.blackwell_rhs});
      return;
    }
  }
}

void scan_averaged(const std::vector<BoundRow>& rows, int player,
                   std::vector<Violation>& out) {
  for (const BoundRow& r : rows) {
    if (r.realized_objective > r.theorem_rhs + 1e-8) {
      out.push_back(Violation{"bound_domination", "seed-average", r.t, player,
                              r.realized_objective, r.theorem_rhs});
      break;
    }
  }
  for (const BoundRow& r : rows) {
    if (r.potential > r.potential_bound + 1e-6) {
      out.push_back(Violation{"potential_envelope", "seed-average", r.t,
                              player, r.potential, r.potential_bound});
      break;
    }
  }
}

std::string violation_message(const Violation& v) {
  std::string msg = v.kind + " violated at seed=" + v.where +
                    " t=" + std::to_string(v.t);
  if (v.player > 0) msg += " player=" + std::to_string(v.player);
  msg += " (" + format_double(v.lhs) + " > " + format_double(v.rhs) + ")";
  return msg;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["family"] = enum_name(cfg.family, kFamilyNames);
  j["link"] =
      cfg.link.kind == LinkFunction::Kind::kPolynomial ? "poly" : "exp";
  j["link_param"] = cfg.link.param;
  j["reward_bound"] = cfg.reward_bound;
  j["estimator"] = enum_name(cfg.estimator.kind, kEstimatorNames);
  switch (cfg.estimator.kind) {
    case EstimatorConfig::Kind::kExact:
      break;
    case EstimatorConfig::Kind::kNoisy:
      j["noise_scale"] = cfg.estimator.noise_scale;
      break;
    case EstimatorConfig::Kind::kQuantized:
      j["quantum"] = cfg.estimator.quantum;
      break;
    case EstimatorConfig::Kind::kLinear:
      j["learning_rate"] = cfg.estimator.learning_rate;
      j["projection_rank"] = cfg.estimator.projection_rank;
      break;
  }
  if (cfg.game_mode) {
    j["game"] = cfg.game_path;
  } else {
    j["actions"] = cfg.num_actions;
    j["adversary"] = enum_name(cfg.adversary, kAdversaryNames);
    if (cfg.adversary == AdversaryKind::kConstant)
      j["constant_reward"] = cfg.constant_reward;
  }
  j["horizon"] = cfg.horizon;
  j["jobs"] = cfg.jobs;
  j["out"] = cfg.out_dir;
  return j;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  std::optional<MatrixGame> game;
  if (config.game_mode)
    game = MatrixGame::load(config.game_path, config.reward_bound);

  // Bound contexts for re-evaluating the averaged envelope columns. A
  // single-action player keeps a null context (its trace is all zeros).
  BoundContext ctx1, ctx2;
  ctx1.family_size = 0;
  ctx2.family_size = 0;
  if (config.game_mode) {
    if (game->rows >= 2)
      ctx1 = BoundContext::for_family(
          config.link, build_family(config.family, game->rows),
          config.reward_bound);
    if (game->cols >= 2)
      ctx2 = BoundContext::for_family(
          config.link, build_family(config.family, game->cols),
          config.reward_bound);
  } else {
    ctx1 = BoundContext::for_family(
        config.link, build_family(config.family, config.num_actions),
        config.reward_bound);
  }

  const std::size_t n_seeds = config.seeds.size();
  const std::size_t window =
      std::min<std::size_t>(std::max(config.jobs, 1), n_seeds);
  std::vector<std::future<SeedRunResult>> futures(n_seeds);
  auto launch = [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    futures[i] = std::async(std::launch::async, [&config, &game, seed]() {
      return game ? run_seed(config, *game, seed) : run_seed(config, seed);
    });
  };
  for (std::size_t i = 0; i < window; ++i) launch(i);

  RunOutcome outcome;
  TraceAverager avg1, avg2;
  std::vector<Violation> violations;
  std::size_t next_launch = window;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    SeedRunResult res = futures[i].get();
    if (next_launch < n_seeds) launch(next_launch++);
    const std::uint64_t seed = config.seeds[i];
    if (config.game_mode) {
      const std::string p1 =
          config.out_dir + "/seed_" + std::to_string(seed) + "_p1.csv";
      const std::string p2 =
          config.out_dir + "/seed_" + std::to_string(seed) + "_p2.csv";
      write_trace_csv(p1, res.rows);
      write_trace_csv(p2, res.rows2);
      outcome.files.push_back(p1);
      outcome.files.push_back(p2);
      scan_blackwell(res.rows, seed, 1, violations);
      scan_blackwell(res.rows2, seed, 2, violations);
      avg2.add(res.rows2);
    } else {
      const std::string p =
          config.out_dir + "/seed_" + std::to_string(seed) + ".csv";
      write_trace_csv(p, res.rows);
      outcome.files.push_back(p);
      scan_blackwell(res.rows, seed, 0, violations);
    }
    avg1.add(res.rows);
  }

  const std::vector<BoundRow> averaged1 = avg1.average(ctx1);
  std::vector<BoundRow> averaged2;
  if (config.game_mode) {
    averaged2 = avg2.average(ctx2);
    const std::string a1 = config.out_dir + "/average_p1.csv";
    const std::string a2 = config.out_dir + "/average_p2.csv";
    write_trace_csv(a1, averaged1);
    write_trace_csv(a2, averaged2);
    outcome.files.push_back(a1);
    outcome.files.push_back(a2);
    scan_averaged(averaged1, 1, violations);
    scan_averaged(averaged2, 2, violations);
  } else {
    const std::string a = config.out_dir + "/average.csv";
    write_trace_csv(a, averaged1);
    outcome.files.push_back(a);
    scan_averaged(averaged1, 0, violations);
  }

  const std::string svg = config.out_dir + "/summary.svg";
  write_summary_svg(svg, averaged1, config.game_mode ? &averaged2 : nullptr);
  outcome.files.push_back(svg);

  nlohmann::json meta;
  meta["tool"] = "phirm";
  meta["version"] = "0.1.0";
  meta["trace_schema"] = "phirm-trace-v1";
  meta["columns"] = nlohmann::json::array(
      {"t", "realized_objective", "blackwell_lhs", "blackwell_rhs",
       "g_error_sum", "theorem_rhs", "potential", "potential_bound"});
  meta["config"] = config_json(config);
  meta["config_text"] = config.canonical_text();
  meta["config_hash"] = hash_hex(config.hash());
  meta["seeds"] = config.seeds;
  if (config.game_mode) {
    meta["game"] = {{"path", config.game_path},
                    {"rows", game->rows},
                    {"cols", game->cols},
                    {"normalization",
                     {{"player1",
                       {{"scale", game->scale1}, {"shift", game->shift1}}},
                      {"player2",
                       {{"scale", game->scale2}, {"shift", game->shift2}}}}}};
  }
  meta["files"] = outcome.files;
  meta["status"] = violations.empty() ? "ok" : violation_message(violations[0]);
  const std::string meta_path = config.out_dir + "/run_meta.json";
  {
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + meta_path);
    out << meta.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for " + meta_path);
  }
  outcome.files.push_back(meta_path);

  if (!violations.empty()) {
    outcome.exit_code = 1;
    outcome.message = violation_message(violations[0]);
  } else {
    outcome.exit_code = 0;
    outcome.message = "ok: " + std::to_string(n_seeds) + " seeds x " +
                      std::to_string(config.horizon) + " steps";
  }
  return outcome;
}

}  // namespace phirm
