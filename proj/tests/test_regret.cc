#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.h"
#include "phirm/regret.h"

using namespace phirm;

TEST_CASE("identity member carries zero regret") {
  const TransformationFamily fam = build_family(FamilyKind::kInternal, 3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = int(rng() % 3);
    RewardFunction r(3);
    for (double& v : r) v = oracle::unif(rng, 0.0, 1.0);
    const std::vector<double> rho = instantaneous_regret(fam, a, r);
    CHECK(rho[0] == 0.0);  // member 0 is the identity
  }
}

TEST_CASE("constant-map regret is the reward gap") {
  // Target action 0 under r = (1, 0): playing action 1 forgoes exactly 1.
  const TransformationFamily ext = build_family(FamilyKind::kExternal, 2);
  const std::vector<double> rho = instantaneous_regret(ext, 1, {1.0, 0.0});
  CHECK(rho[0] == doctest::Approx(1.0));
  CHECK(rho[1] == doctest::Approx(0.0));
}

TEST_CASE("instantaneous entries stay within the reward bound") {
  const double U = 1.0;
  std::mt19937_64 rng(99);
  for (FamilyKind kind :
       {FamilyKind::kExternal, FamilyKind::kInternal, FamilyKind::kSwap}) {
    const TransformationFamily fam = build_family(kind, 3);
    for (int trial = 0; trial < 1000; ++trial) {
      const int a = int(rng() % 3);
      RewardFunction r(3);
      for (double& v : r) v = oracle::unif(rng, 0.0, U);
      for (double rho : instantaneous_regret(fam, a, r)) {
        CHECK(rho <= U + 1e-12);
        CHECK(rho >= -U - 1e-12);
      }
    }
  }
}

TEST_CASE("regret vector p-norm respects the activation bound") {
  std::mt19937_64 rng(123);
  for (FamilyKind kind :
       {FamilyKind::kExternal, FamilyKind::kInternal, FamilyKind::kSwap}) {
    for (int n = 2; n <= 4; ++n) {
      const TransformationFamily fam = build_family(kind, n);
      const int mu = maximal_activation(fam);
      for (int trial = 0; trial < 100; ++trial) {
        const int a = int(rng() % n);
        RewardFunction r(n);
        for (double& v : r) v = oracle::unif(rng, 0.0, 1.0);
        const std::vector<double> rho = instantaneous_regret(fam, a, r);
        for (double p : {1.5, 2.0, 3.0})
          CHECK(oracle::pnorm(rho, p) <= std::pow(double(mu), 1.0 / p) + 1e-9);
      }
    }
  }
}

TEST_CASE("point-mass expectation equals the instantaneous vector") {
  const TransformationFamily fam = build_family(FamilyKind::kInternal, 3);
  const RewardFunction r = {0.2, 0.9, 0.4};
  for (int a = 0; a < 3; ++a) {
    const std::vector<double> inst = instantaneous_regret(fam, a, r);
    const std::vector<double> exp =
        expected_regret(fam, MixedAction::delta(3, a), r);
    for (std::size_t j = 0; j < inst.size(); ++j)
      CHECK(exp[j] == doctest::Approx(inst[j]).epsilon(1e-12));
  }
}

TEST_CASE("constant rewards wash out external comparisons") {
  const TransformationFamily ext = build_family(FamilyKind::kExternal, 4);
  const std::vector<double> exp =
      expected_regret(ext, MixedAction::uniform(4), RewardFunction(4, 0.7));
  for (double v : exp) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("expectation is the q-weighted average of instantaneous vectors") {
  std::mt19937_64 rng(7);
  for (FamilyKind kind : {FamilyKind::kExternal, FamilyKind::kSwap}) {
    const TransformationFamily fam = build_family(kind, 3);
    for (int trial = 0; trial < 200; ++trial) {
      RewardFunction r(3);
      for (double& v : r) v = oracle::unif(rng, 0.0, 1.0);
      std::vector<double> qv(3);
      double qs = 0.0;
      for (double& v : qv) qs += (v = oracle::unif(rng, 0.001, 1.0));
      for (double& v : qv) v /= qs;
      const MixedAction q(qv);

      std::vector<double> mix(fam.size(), 0.0);
      for (int a = 0; a < 3; ++a) {
        const std::vector<double> inst = instantaneous_regret(fam, a, r);
        for (int j = 0; j < fam.size(); ++j) mix[j] += qv[a] * inst[j];
      }
      const std::vector<double> exp = expected_regret(fam, q, r);
      for (int j = 0; j < fam.size(); ++j)
        CHECK(std::abs(exp[j] - mix[j]) <= 1e-12);
    }
  }
}

TEST_CASE("accumulate sums componentwise and counts steps") {
  CumulativeRegret state(3);
  CHECK(state.t == 0);
  for (double v : state.values) CHECK(v == 0.0);

  const std::vector<double> v = {1.0, -2.0, 0.5};
  accumulate(state, v);
  CHECK(state.t == 1);
  CHECK(state.values == v);

  const std::vector<double> neg = {-1.0, 2.0, -0.5};
  accumulate(state, neg);
  CHECK(state.t == 2);
  for (double x : state.values) CHECK(x == doctest::Approx(0.0));
}

TEST_CASE("accumulate matches one-shot summation on random streams") {
  std::mt19937_64 rng(11);
  CumulativeRegret state(5);
  std::vector<double> total(5, 0.0);
  for (int s = 0; s < 100; ++s) {
    std::vector<double> step(5);
    for (double& v : step) v = oracle::unif(rng, -1.0, 1.0);
    accumulate(state, step);
    for (int j = 0; j < 5; ++j) total[j] += step[j];
  }
  CHECK(state.t == 100);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(state.values[j] - total[j]) <= 1e-12);
}

TEST_CASE("accumulate rejects arity mismatches") {
  CumulativeRegret state(3);
  const std::vector<double> wrong = {1.0, 2.0};
  CHECK_THROWS_AS(accumulate(state, wrong), std::invalid_argument);
}

TEST_CASE("realized objective is max over members divided by t") {
  CumulativeRegret state(3);
  state.values = {3.0, -1.0, 0.0};
  state.t = 3;
  CHECK(realized_objective(state) == doctest::Approx(1.0));

  state.values = {-3.0, -1.0, -2.0};
  CHECK(realized_objective(state) == doctest::Approx(-1.0 / 3.0));

  CumulativeRegret fresh(3);
  CHECK_THROWS_AS(realized_objective(fresh), std::invalid_argument);
}

TEST_CASE("external family reproduces classical external regret") {
  std::mt19937_64 rng(21);
  const TransformationFamily ext = build_family(FamilyKind::kExternal, 4);
  CumulativeRegret state(ext.size());
  std::vector<int> actions;
  std::vector<std::vector<double>> rewards;
  for (int s = 0; s < 500; ++s) {
    const int a = int(rng() % 4);
    RewardFunction r(4);
    for (double& v : r) v = oracle::unif(rng, 0.0, 1.0);
    accumulate(state, instantaneous_regret(ext, a, r));
    actions.push_back(a);
    rewards.push_back(r);
  }
  const double classical = oracle::external_regret(actions, rewards);
  double max_member = state.values[0];
  for (double v : state.values) max_member = std::max(max_member, v);
  CHECK(max_member == doctest::Approx(classical).epsilon(1e-10));
  CHECK(realized_objective(state) == doctest::Approx(classical / 500.0));
}
