#include "phirm/matcher.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phirm {

namespace {

double linf_residual(const StochasticOperator& op,
                     const std::vector<double>& q, std::vector<double>& mq) {
  const int n = op.num_actions;
  std::fill(mq.begin(), mq.end(), 0.0);
  for (int a = 0; a < n; ++a) {
    const double qa = q[a];
    if (qa == 0.0) continue;
    for (int i = 0; i < n; ++i) mq[i] += qa * op.m[a * n + i];
  }
  double res = 0.0;
  for (int i = 0; i < n; ++i) res = std::max(res, std::abs(mq[i] - q[i]));
  return res;
}

// Gaussian elimination with partial pivoting on (M - I) q = 0 with the last
// equation replaced by sum(q) = 1. Returns false on a vanishing pivot.
bool solve_direct(const StochasticOperator& op, std::vector<double>& q) {
  const int n = op.num_actions;
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  double scale = 1.0;
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n; ++j) {
      a[i * n + j] = op.entry(i, j) - (i == j ? 1.0 : 0.0);
      scale = std::max(scale, std::abs(a[i * n + j]));
    }
  for (int j = 0; j < n; ++j) a[(n - 1) * n + j] = 1.0;
  q.assign(n, 0.0);
  q[n - 1] = 1.0;

  const double tiny = 1e-13 * scale;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    if (std::abs(a[pivot * n + col]) <= tiny) return false;
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
      std::swap(q[pivot], q[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] * inv;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
      q[row] -= f * q[col];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    double v = q[col];
    for (int j = col + 1; j < n; ++j) v -= a[col * n + j] * q[j];
    q[col] = v / a[col * n + col];
  }
  return true;
}

bool clean_distribution(std::vector<double>& q) {
  double sum = 0.0;
  for (double& v : q) {
    if (!std::isfinite(v) || v < -1e-9) return false;
    if (v < 0.0) v = 0.0;  // clip solver dust
    sum += v;
  }
  if (sum <= 0.0) return false;
  for (double& v : q) v /= sum;
  return true;
}

}  // namespace

void validate_operator(const StochasticOperator& op, double tol) {
  const int n = op.num_actions;
  if (n < 1 || static_cast<int>(op.m.size()) != n * n)
    throw std::invalid_argument("StochasticOperator: bad shape");
  for (int a = 0; a < n; ++a) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = op.entry(i, a);
      if (!std::isfinite(v) || v < -tol)
        throw std::invalid_argument("StochasticOperator: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw std::invalid_argument("StochasticOperator: column " +
                                  std::to_string(a) + " sums to " +
                                  std::to_string(sum));
  }
}

void assemble_operator(const TransformationFamily& family,
                       std::span<const double> weights,
                       StochasticOperator& out) {
  if (weights.size() != family.members.size())
    throw std::invalid_argument("assemble_operator: weight arity mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument(
          "assemble_operator: weights must be nonnegative");
    total += w;
  }
  if (total <= 0.0)
    throw std::invalid_argument("assemble_operator: degenerate zero-sum weights");
  const int n = family.num_actions;
  out.num_actions = n;
  out.m.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k] / total;
    if (w == 0.0) continue;
    const std::vector<double>& mat = family.members[k].matrix();
    for (std::size_t idx = 0; idx < mat.size(); ++idx) out.m[idx] += w * mat[idx];
  }
}

StochasticOperator assemble_operator(const TransformationFamily& family,
                                     std::span<const double> weights) {
  StochasticOperator out;
  assemble_operator(family, weights, out);
  return out;
}

MixedAction fixed_point(const StochasticOperator& op, double tol) {
  validate_operator(op);
  if (!(tol > 0.0)) throw std::invalid_argument("fixed_point: tol must be > 0");
  const int n = op.num_actions;
  std::vector<double> q(n), mq(n);

  if (solve_direct(op, q) && clean_distribution(q) &&
      linf_residual(op, q, mq) <= tol)
    return MixedAction(std::move(q));

  // Damped power method by repeated squaring: P = (0.99 M + 0.01 I)^(2^60)
  // applied to the uniform start. The 0.99/0.01 mix preserves every fixed
  // point of M and pulls the rest of the spectrum strictly inside the unit
  // disk; squaring sixty times pushes the effective power past any relaxation
  // time doubles can express, so even nearly reducible operators land on a
  // fixed point with a rounding-level residual. Columns are renormalized
  // after every squaring to stop drift.
  std::vector<double> p(op.m), next(op.m.size());
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) p[a * n + i] *= 0.99;
    p[a * n + a] += 0.01;
  }
  for (int round = 0; round < 60; ++round) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < n; ++j) {
        const double w = p[a * n + j];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) next[a * n + i] += w * p[j * n + i];
      }
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += next[a * n + i];
      for (int i = 0; i < n; ++i) next[a * n + i] /= sum;
    }
    p.swap(next);
  }
  q.assign(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) q[i] += p[a * n + i] / static_cast<double>(n);

  if (!clean_distribution(q))
    throw std::runtime_error("fixed_point: iteration left the simplex");
  if (linf_residual(op, q, mq) > tol)
    throw std::runtime_error("fixed_point: iteration did not converge");
  return MixedAction(std::move(q));
}

RegretMatcher::RegretMatcher(const RewardSystem& system,
                             TransformationFamily family, MatcherConfig config,
                             std::uint64_t estimator_seed)
    : system_(system),
      family_(std::move(family)),
      config_(config),
      triple_(triple_for(config.link)),
      estimator_(make_estimator(config.estimator, family_.size(), estimator_seed)),
      exact_(family_.size()),
      estimated_(family_.size()) {
  if (family_.num_actions != system.num_actions)
    throw std::invalid_argument("RegretMatcher: family/system arity mismatch");
  const int k = family_.size();
  trace_.exact_weights.resize(k);
  trace_.est_weights.resize(k);
  step_buf_.resize(k);
  g_exact_.resize(k);
  g_est_.resize(k);
}

RegretMatcher::~RegretMatcher() = default;

MixedAction RegretMatcher::act() {
  const int k = family_.size();
  estimator_->estimate(exact_, estimated_.values);
  estimated_.t = exact_.t;

  link_apply(config_.link, exact_.values, trace_.exact_weights);
  link_apply(config_.link, estimated_.values, trace_.est_weights);
  double err = 0.0, est_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    err += std::abs(trace_.exact_weights[i] - trace_.est_weights[i]);
    est_sum += trace_.est_weights[i];
  }
  trace_.weight_err_l1 = err;
  trace_.est_weight_sum = est_sum;

  triple_.weight(exact_.values, g_exact_);
  triple_.weight(estimated_.values, g_est_);
  double gerr = 0.0;
  for (int i = 0; i < k; ++i) gerr += std::abs(g_exact_[i] - g_est_[i]);
  trace_.bound_weight_err_l1 = gerr;

  trace_.degenerate = !(est_sum > 0.0);
  if (trace_.degenerate) return MixedAction::uniform(system_.num_actions);
  assemble_operator(family_, trace_.est_weights, op_);
  return fixed_point(op_, config_.fixed_point_tolerance);
}

void RegretMatcher::observe(int action, const RewardFunction& reward) {
  validate_reward(system_, reward);
  instantaneous_regret(family_, action, reward, step_buf_);
  accumulate(exact_, step_buf_);
}

void RegretMatcher::reset() {
  std::fill(exact_.values.begin(), exact_.values.end(), 0.0);
  exact_.t = 0;
  std::fill(estimated_.values.begin(), estimated_.values.end(), 0.0);
  estimated_.t = 0;
  estimator_->reset();
  trace_ = StepTrace{};
  const int k = family_.size();
  trace_.exact_weights.resize(k);
  trace_.est_weights.resize(k);
}

}  // namespace phirm
