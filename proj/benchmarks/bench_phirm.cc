// Microbenchmarks for the hot path of a matcher step: operator assembly,
// fixed-point solves, link evaluation, and full act/observe cycles.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "phirm/arena.h"
#include "phirm/experiment.h"

namespace {

using namespace phirm;

std::vector<double> random_weights(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(size);
  for (double& v : w) v = 0.05 + next_unit(rng);
  return w;
}

FamilyKind family_arg(int v) {
  switch (v) {
    case 0: return FamilyKind::kExternal;
    case 1: return FamilyKind::kInternal;
    default: return FamilyKind::kSwap;
  }
}

void BM_assemble_operator(benchmark::State& state) {
  const TransformationFamily family =
      build_family(family_arg(static_cast<int>(state.range(0))),
                   static_cast<int>(state.range(1)));
  const std::vector<double> w = random_weights(family.size(), 7);
  StochasticOperator op;
  for (auto _ : state) {
    assemble_operator(family, w, op);
    benchmark::DoNotOptimize(op.m.data());
  }
}
BENCHMARK(BM_assemble_operator)
    ->Args({0, 5})
    ->Args({1, 5})
    ->Args({2, 4});

void BM_fixed_point(benchmark::State& state) {
  const TransformationFamily family =
      build_family(family_arg(static_cast<int>(state.range(0))),
                   static_cast<int>(state.range(1)));
  const std::vector<double> w = random_weights(family.size(), 11);
  const StochasticOperator op = assemble_operator(family, w);
  for (auto _ : state) {
    MixedAction q = fixed_point(op);
    benchmark::DoNotOptimize(q.probs().data());
  }
}
BENCHMARK(BM_fixed_point)
    ->Args({0, 5})
    ->Args({1, 5})
    ->Args({2, 4});

void BM_link_apply(benchmark::State& state) {
  const LinkFunction link = state.range(0) == 0
                                ? LinkFunction::polynomial(2.0)
                                : LinkFunction::exponential(0.1);
  std::mt19937_64 rng(3);
  std::vector<double> x(64), out(64);
  for (double& v : x) v = 20.0 * next_unit(rng) - 10.0;
  for (auto _ : state) {
    link_apply(link, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_link_apply)->Arg(0)->Arg(1);

// One full protocol step (act, sample, observe, bound row) against an
// adaptive reward stream.
void BM_matcher_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  const RewardSystem system(n, 1.0);
  MatcherConfig cfg;
  RegretMatcher matcher(system,
                        build_family(family_arg(static_cast<int>(
                                         state.range(0))), n),
                        cfg, 17);
  auto adversary =
      make_adversary(AdversaryKind::kAdaptiveBestResponse, system, 23);
  BoundTracker tracker(cfg.link, matcher.family(), 1.0);
  History history;
  std::mt19937_64 sample_rng(substream_seed(5, kStreamSample1));
  for (auto _ : state) {
    const MixedAction q = matcher.act();
    const int action = sample_action(q, sample_rng);
    const RewardFunction reward = adversary->next_reward(history);
    matcher.observe(action, reward);
    const BoundRow row = tracker.on_step(matcher, q, reward);
    benchmark::DoNotOptimize(row.blackwell_lhs);
    history.append(action, reward);
  }
}
BENCHMARK(BM_matcher_step)
    ->Args({0, 3})
    ->Args({0, 5})
    ->Args({1, 3})
    ->Args({2, 4});

void BM_self_play_step(benchmark::State& state) {
  const MatrixGame rps = MatrixGame::rock_paper_scissors();
  MatcherConfig cfg;
  const long chunk = 256;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const SelfPlayResult sp =
        self_play(rps, cfg, FamilyKind::kInternal, chunk, seed++);
    benchmark::DoNotOptimize(sp.trace1.back().potential);
  }
  state.SetItemsProcessed(state.iterations() * chunk);
}
BENCHMARK(BM_self_play_step);

}  // namespace

BENCHMARK_MAIN();
