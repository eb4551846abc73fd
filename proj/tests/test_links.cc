#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.h"
#include "phirm/links.h"

using namespace phirm;

TEST_CASE("link construction validates parameters") {
  CHECK_THROWS_AS(LinkFunction::polynomial(1.0), std::invalid_argument);
  CHECK_THROWS_AS(LinkFunction::polynomial(0.5), std::invalid_argument);
  CHECK_THROWS_AS(LinkFunction::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LinkFunction::exponential(-1.0), std::invalid_argument);
  CHECK(LinkFunction::polynomial(2.5).param == 2.5);
  CHECK(LinkFunction::exponential(0.1).param == 0.1);
}

TEST_CASE("polynomial link clips negatives and raises to p-1") {
  const std::vector<double> y2 =
      link_apply(LinkFunction::polynomial(2.0), {-1.0, 0.0, 2.0});
  CHECK(y2[0] == 0.0);
  CHECK(y2[1] == 0.0);
  CHECK(y2[2] == doctest::Approx(2.0));

  const std::vector<double> y3 =
      link_apply(LinkFunction::polynomial(3.0), {2.0, -5.0});
  CHECK(y3[0] == doctest::Approx(4.0));
  CHECK(y3[1] == 0.0);
}

TEST_CASE("exponential link is evaluated relative to the max entry") {
  const std::vector<double> y =
      link_apply(LinkFunction::exponential(1.0), {0.0, 0.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(1.0));

  // Entries that would overflow a raw exp stay finite and ordered.
  const std::vector<double> big =
      link_apply(LinkFunction::exponential(10.0), {500.0, 400.0, -300.0});
  CHECK(big[0] == doctest::Approx(1.0));
  CHECK(big[1] >= 0.0);
  CHECK(big[2] >= 0.0);
  CHECK(big[1] <= big[0]);
  for (double v : big) CHECK(std::isfinite(v));
}

TEST_CASE("link outputs are nonnegative and monotone") {
  std::mt19937_64 rng(31);
  const std::vector<LinkFunction> links = {
      LinkFunction::polynomial(1.5), LinkFunction::polynomial(2.0),
      LinkFunction::polynomial(3.0), LinkFunction::exponential(0.5)};
  for (const LinkFunction& link : links) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(4), bump(4);
      for (double& v : x) v = oracle::unif(rng, -5.0, 5.0);
      for (int i = 0; i < 4; ++i) bump[i] = x[i] + oracle::unif(rng, 0.0, 2.0);
      const std::vector<double> y = link_apply(link, x);
      const std::vector<double> yb = link_apply(link, bump);
      for (double v : y) CHECK(v >= 0.0);
      if (link.kind == LinkFunction::Kind::kPolynomial)
        for (int i = 0; i < 4; ++i) CHECK(y[i] <= yb[i] + 1e-12);
    }
  }
}

TEST_CASE("small-p triple evaluates the stated closed forms") {
  const GordonTriple triple = triple_for(LinkFunction::polynomial(2.0));
  const std::vector<double> x = {3.0, -1.0};
  CHECK(triple.potential(x) == doctest::Approx(9.0));
  std::vector<double> g(2);
  triple.weight(x, g);
  CHECK(g[0] == doctest::Approx(6.0));
  CHECK(g[1] == 0.0);
  const std::vector<double> y = {1.0, 2.0};
  CHECK(triple.curvature(y) == doctest::Approx(5.0));  // ||y||_2^2
}

TEST_CASE("large-p triple squares the positive-part norm") {
  const GordonTriple triple = triple_for(LinkFunction::polynomial(3.0));
  const std::vector<double> x = {2.0, -7.0};
  CHECK(triple.potential(x) == doctest::Approx(4.0));  // ||(2,0)||_3^2
  std::vector<double> g(2);
  triple.weight(x, g);
  // g_0 = 2 * 2^2 / ||x+||_3^1 = 8 / 2 = 4
  CHECK(g[0] == doctest::Approx(4.0));
  CHECK(g[1] == 0.0);
  // gamma(y) = (p-1) ||y||_3^2
  const std::vector<double> y = {2.0, 0.0};
  CHECK(triple.curvature(y) == doctest::Approx(8.0));

  std::vector<double> zeros(3, 0.0);
  const std::vector<double> neg = {-1.0, -2.0, 0.0};
  triple.weight(neg, std::span<double>(zeros));
  for (double v : zeros) CHECK(v == 0.0);
}

TEST_CASE("exponential triple uses log-sum-exp and softmax") {
  const GordonTriple triple = triple_for(LinkFunction::exponential(1.0));
  const std::vector<double> x(4, 0.0);
  CHECK(triple.potential(x) == doctest::Approx(std::log(4.0)));
  std::vector<double> g(4);
  triple.weight(x, g);
  for (double v : g) CHECK(v == doctest::Approx(0.25));
  const std::vector<double> y = {0.5, -2.0, 1.0, 0.0};
  CHECK(triple.curvature(y) == doctest::Approx(2.0));
}

TEST_CASE("softmax weights sum to one even for extreme inputs") {
  const GordonTriple triple = triple_for(LinkFunction::exponential(3.0));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(5), g(5);
    for (double& v : x) v = oracle::unif(rng, -50.0, 50.0);
    triple.weight(x, g);
    double sum = 0.0;
    for (double v : g) {
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("triple weight is a positive rescale of the link output") {
  std::mt19937_64 rng(17);
  const std::vector<LinkFunction> links = {
      LinkFunction::polynomial(1.5), LinkFunction::polynomial(2.0),
      LinkFunction::polynomial(3.0), LinkFunction::exponential(0.7)};
  for (const LinkFunction& link : links) {
    const GordonTriple triple = triple_for(link);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(4), g(4);
      bool has_positive = false;
      for (double& v : x) {
        v = oracle::unif(rng, -3.0, 3.0);
        if (v > 0.0) has_positive = true;
      }
      if (link.kind == LinkFunction::Kind::kPolynomial && !has_positive)
        continue;
      const std::vector<double> f = link_apply(link, x);
      triple.weight(x, g);
      // Ratio g_i / f_i must be one shared positive constant across entries.
      double ratio = 0.0;
      for (int i = 0; i < 4; ++i)
        if (f[i] > 1e-12) {
          ratio = g[i] / f[i];
          break;
        }
      CHECK(ratio > 0.0);
      for (int i = 0; i < 4; ++i)
        if (f[i] > 1e-12) CHECK(g[i] / f[i] == doctest::Approx(ratio).epsilon(1e-9));
        else CHECK(g[i] <= 1e-12);
    }
  }
}

TEST_CASE("zero step never violates the triple inequality") {
  const std::vector<double> zeros(3, 0.0);
  std::mt19937_64 rng(4);
  for (const LinkFunction& link :
       {LinkFunction::polynomial(1.5), LinkFunction::polynomial(3.0),
        LinkFunction::exponential(0.2)}) {
    const GordonTriple triple = triple_for(link);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(3);
      for (double& v : x) v = oracle::unif(rng, -10.0, 10.0);
      CHECK(check_gordon(triple, x, zeros));
    }
  }
}

TEST_CASE("triple inequality holds on random pairs") {
  std::mt19937_64 rng(2718);
  const std::vector<LinkFunction> links = {
      LinkFunction::polynomial(1.5), LinkFunction::polynomial(2.0),
      LinkFunction::polynomial(2.5), LinkFunction::polynomial(3.0),
      LinkFunction::exponential(0.01), LinkFunction::exponential(1.0)};
  for (const LinkFunction& link : links) {
    const GordonTriple triple = triple_for(link);
    for (int trial = 0; trial < 10000; ++trial) {
      const int n = 2 + int(rng() % 4);
      std::vector<double> x(n), y(n);
      for (double& v : x) v = oracle::unif(rng, -10.0, 10.0);
      for (double& v : y) v = oracle::unif(rng, -10.0, 10.0);
      CHECK(check_gordon(triple, x, y));
    }
  }
}

TEST_CASE("small-p curvature is tight at the origin") {
  // G(0 + e_1) = 1 must be matched exactly by gamma(e_1) = ||e_1||_p^p = 1;
  // any smaller curvature constant would fail here.
  const GordonTriple triple = triple_for(LinkFunction::polynomial(1.5));
  const std::vector<double> zero = {0.0, 0.0};
  const std::vector<double> e1 = {1.0, 0.0};
  std::vector<double> g(2);
  triple.weight(zero, g);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(triple.potential(e1) == doctest::Approx(triple.curvature(e1)));
  CHECK(check_gordon(triple, zero, e1, 1e-12));
}

TEST_CASE("exponential triple survives large shifts") {
  const GordonTriple triple = triple_for(LinkFunction::exponential(5.0));
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> x(3), y(3);
    for (double& v : x) v = oracle::unif(rng, -50.0, 50.0);
    for (double& v : y) v = oracle::unif(rng, -2.0, 2.0);
    CHECK(check_gordon(triple, x, y));
  }
}

TEST_CASE("curvature supremum matches the worst regret vector") {
  // mu entries of magnitude U is the extreme case; curvature at that vector
  // must meet the precomputed supremum.
  const double U = 1.0;
  const int mu = 3;
  std::vector<double> worst(5, 0.0);
  for (int i = 0; i < mu; ++i) worst[i] = U;

  for (const LinkFunction& link :
       {LinkFunction::polynomial(1.5), LinkFunction::polynomial(2.0),
        LinkFunction::polynomial(3.0), LinkFunction::exponential(0.4)}) {
    const GordonTriple triple = triple_for(link);
    const double sup = triple.curvature_sup(U, mu);
    CHECK(triple.curvature(worst) <= sup + 1e-12);
    if (link.kind == LinkFunction::Kind::kPolynomial)
      CHECK(triple.curvature(worst) == doctest::Approx(sup));
  }

  const GordonTriple t2 = triple_for(LinkFunction::polynomial(2.0));
  CHECK(t2.curvature_sup(1.0, 2) == doctest::Approx(2.0));
  const GordonTriple t3 = triple_for(LinkFunction::polynomial(3.0));
  CHECK(t3.curvature_sup(1.0, 2) == doctest::Approx(2.0 * std::pow(2.0, 2.0 / 3.0)));
  const GordonTriple te = triple_for(LinkFunction::exponential(0.1));
  CHECK(te.curvature_sup(2.0, 5) == doctest::Approx(0.2));
  CHECK_THROWS_AS(t2.curvature_sup(0.0, 2), std::invalid_argument);
}
