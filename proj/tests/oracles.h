#pragma once

// Test-side reference implementations. These are written independently of
// the library code they check and favor clarity over speed.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double unif(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Dense column-major matrix-vector product y = M x.
inline std::vector<double> matvec(const std::vector<double>& col_major, int n,
                                  const std::vector<double>& x) {
  std::vector<double> y(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) y[i] += col_major[a * n + i] * x[a];
  return y;
}

// Stationary distribution of a column-stochastic matrix by long plain power
// iteration. Only meaningful when the fixed point is unique (strictly
// positive matrices in the tests).
inline std::vector<double> stationary(const std::vector<double>& col_major,
                                      int n, long iters = 500000,
                                      double tol = 1e-14) {
  std::vector<double> q(n, 1.0 / n);
  for (long it = 0; it < iters; ++it) {
    std::vector<double> next = matvec(col_major, n, q);
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;
    double delta = 0.0;
    for (int i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - q[i]));
    q = next;
    if (delta < tol) break;
  }
  return q;
}

// Classical external regret: max over fixed actions of the total reward gap
// against the played sequence.
inline double external_regret(const std::vector<int>& actions,
                              const std::vector<std::vector<double>>& rewards) {
  if (actions.empty()) throw std::invalid_argument("empty history");
  const int n = static_cast<int>(rewards.front().size());
  double best = -1e300;
  for (int a = 0; a < n; ++a) {
    double total = 0.0;
    for (std::size_t s = 0; s < actions.size(); ++s)
      total += rewards[s][a] - rewards[s][actions[s]];
    best = std::max(best, total);
  }
  return best;
}

// Brute-force correlated-equilibrium deviation gap from an empirical joint
// frequency table (row-major rows x cols, sums to 1).
inline double ce_gap_brute(int rows, int cols, const std::vector<double>& u1,
                           const std::vector<double>& u2,
                           const std::vector<double>& freq) {
  double best = 0.0;
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < rows; ++b) {
      if (a == b) continue;
      double gain = 0.0;
      for (int o = 0; o < cols; ++o)
        gain += freq[a * cols + o] * (u1[b * cols + o] - u1[a * cols + o]);
      best = std::max(best, gain);
    }
  for (int a = 0; a < cols; ++a)
    for (int b = 0; b < cols; ++b) {
      if (a == b) continue;
      double gain = 0.0;
      for (int o = 0; o < rows; ++o)
        gain += freq[o * cols + a] * (u2[o * cols + b] - u2[o * cols + a]);
      best = std::max(best, gain);
    }
  return best;
}

// p-norm of a vector.
inline double pnorm(const std::vector<double>& v, double p) {
  double sum = 0.0;
  for (double x : v) sum += std::pow(std::abs(x), p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace oracle
