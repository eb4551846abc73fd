#include "phirm/links.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace phirm {

namespace {

double max_entry(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  return m;
}

// ||max(x, 0)||_p
double plus_norm(std::span<const double> x, double p) {
  double sum = 0.0;
  for (double v : x)
    if (v > 0.0) sum += std::pow(v, p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

LinkFunction LinkFunction::polynomial(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("LinkFunction::polynomial: requires p > 1");
  return LinkFunction{Kind::kPolynomial, p};
}

LinkFunction LinkFunction::exponential(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("LinkFunction::exponential: requires eta > 0");
  return LinkFunction{Kind::kExponential, eta};
}

void link_apply(const LinkFunction& link, std::span<const double> x,
                std::span<double> out) {
  if (x.size() != out.size())
    throw std::invalid_argument("link_apply: arity mismatch");
  if (x.empty()) return;
  if (link.kind == LinkFunction::Kind::kPolynomial) {
    const double e = link.param - 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = x[i] > 0.0 ? std::pow(x[i], e) : 0.0;
  } else {
    const double m = max_entry(x);
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = std::exp(link.param * (x[i] - m));
  }
}

std::vector<double> link_apply(const LinkFunction& link,
                               const std::vector<double>& x) {
  std::vector<double> out(x.size());
  link_apply(link, x, out);
  return out;
}

double GordonTriple::potential(std::span<const double> x) const {
  if (x.empty()) throw std::invalid_argument("GordonTriple: empty input");
  const double p = link_.param;
  switch (link_.kind) {
    case LinkFunction::Kind::kPolynomial: {
      if (p > 2.0) {
        const double norm = plus_norm(x, p);
        return norm * norm;
      }
      double sum = 0.0;
      for (double v : x)
        if (v > 0.0) sum += std::pow(v, p);
      return sum;
    }
    case LinkFunction::Kind::kExponential: {
      const double eta = p;
      const double m = max_entry(x);
      double sum = 0.0;
      for (double v : x) sum += std::exp(eta * (v - m));
      return m + std::log(sum) / eta;
    }
  }
  return 0.0;
}

void GordonTriple::weight(std::span<const double> x,
                          std::span<double> out) const {
  if (x.size() != out.size())
    throw std::invalid_argument("GordonTriple: arity mismatch");
  if (x.empty()) return;
  const double p = link_.param;
  switch (link_.kind) {
    case LinkFunction::Kind::kPolynomial: {
      if (p > 2.0) {
        const double norm = plus_norm(x, p);
        if (norm == 0.0) {
          std::fill(out.begin(), out.end(), 0.0);
          return;
        }
        const double scale = 2.0 / std::pow(norm, p - 2.0);
        for (std::size_t i = 0; i < x.size(); ++i)
          out[i] = x[i] > 0.0 ? scale * std::pow(x[i], p - 1.0) : 0.0;
        return;
      }
      for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] > 0.0 ? p * std::pow(x[i], p - 1.0) : 0.0;
      return;
    }
    case LinkFunction::Kind::kExponential: {
      const double eta = p;
      const double m = max_entry(x);
      double sum = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::exp(eta * (x[i] - m));
        sum += out[i];
      }
      for (std::size_t i = 0; i < x.size(); ++i) out[i] /= sum;
      return;
    }
  }
}

double GordonTriple::curvature(std::span<const double> y) const {
  if (y.empty()) throw std::invalid_argument("GordonTriple: empty input");
  const double p = link_.param;
  switch (link_.kind) {
    case LinkFunction::Kind::kPolynomial: {
      double sum = 0.0;
      for (double v : y) sum += std::pow(std::abs(v), p);
      if (p > 2.0) return (p - 1.0) * std::pow(sum, 2.0 / p);
      return sum;
    }
    case LinkFunction::Kind::kExponential: {
      double m = 0.0;
      for (double v : y) m = std::max(m, std::abs(v));
      return 0.5 * p * m * m;
    }
  }
  return 0.0;
}

double GordonTriple::curvature_sup(double reward_bound, int activation) const {
  if (!(reward_bound > 0.0))
    throw std::invalid_argument("GordonTriple: reward bound must be positive");
  if (activation < 0)
    throw std::invalid_argument("GordonTriple: negative activation");
  const double U = reward_bound;
  const double mu = static_cast<double>(activation);
  const double p = link_.param;
  switch (link_.kind) {
    case LinkFunction::Kind::kPolynomial:
      // One-step regret vectors have at most mu entries of magnitude <= U
      // that can be nonzero, so ||y||_p <= U mu^(1/p).
      if (p > 2.0) return (p - 1.0) * U * U * std::pow(mu, 2.0 / p);
      return std::pow(U, p) * mu;
    case LinkFunction::Kind::kExponential:
      return 0.5 * p * U * U;
  }
  return 0.0;
}

GordonTriple triple_for(const LinkFunction& link) { return GordonTriple(link); }

bool check_gordon(const GordonTriple& triple, std::span<const double> x,
                  std::span<const double> y, double slack) {
  if (x.size() != y.size())
    throw std::invalid_argument("check_gordon: arity mismatch");
  std::vector<double> sum(x.size()), g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sum[i] = x[i] + y[i];
  triple.weight(x, g);
  double gy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) gy += g[i] * y[i];
  const double lhs = triple.potential(sum);
  const double rhs = triple.potential(x) + gy + triple.curvature(y);
  return lhs <= rhs + slack;
}

}  // namespace phirm
