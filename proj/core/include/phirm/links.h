#pragma once

#include <span>
#include <vector>

namespace phirm {

// Monotone map from cumulative regret vectors to nonnegative member weights.
//   polynomial: x_i -> (max(x_i, 0))^(p-1),  p > 1
//   exponential: x_i -> exp(eta * (x_i - max_j x_j)),  eta > 0
// The exponential form is evaluated with the max subtracted so it never
// overflows; that rescales all weights by one positive factor, which leaves
// the induced play unchanged.
struct LinkFunction {
  enum class Kind { kPolynomial, kExponential };

  Kind kind;
  double param;  // p for polynomial, eta for exponential

  static LinkFunction polynomial(double p);
  static LinkFunction exponential(double eta);
};

void link_apply(const LinkFunction& link, std::span<const double> x,
                std::span<double> out);
std::vector<double> link_apply(const LinkFunction& link,
                               const std::vector<double>& x);

// Smooth-potential triple (potential G, weight map g, curvature gamma)
// satisfying G(x + y) <= G(x) + g(x).y + gamma(y) for all x, y. One triple is
// associated with each link function:
//   polynomial p > 2:    G = ||x+||_p^2, g_i = 2 (x_i)^(p-1) / ||x+||_p^(p-2)
//                        on x_i > 0 else 0, gamma = (p-1) ||y||_p^2
//   polynomial 1 < p <= 2: G = ||x+||_p^p, g_i = p (max(x_i,0))^(p-1),
//                        gamma = ||y||_p^p
//   exponential:         G = log-sum-exp(eta x) / eta, g = softmax(eta x),
//                        gamma = eta/2 * ||y||_inf^2
// g is the played link rescaled by a positive factor (2/||x+||_p^(p-2), p,
// or 1/sum of weights), so both induce the same fixed-point play.
class GordonTriple {
 public:
  double potential(std::span<const double> x) const;            // G
  void weight(std::span<const double> x, std::span<double> out) const;  // g
  double curvature(std::span<const double> y) const;             // gamma
  // Supremum of curvature over one-step regret vectors of a family with
  // maximal activation mu when rewards live in [0, U].
  double curvature_sup(double reward_bound, int activation) const;

  const LinkFunction& link() const { return link_; }

 private:
  friend GordonTriple triple_for(const LinkFunction& link);
  explicit GordonTriple(LinkFunction link) : link_(link) {}

  LinkFunction link_;
};

GordonTriple triple_for(const LinkFunction& link);

// Checks the defining inequality at one (x, y) pair with additive slack.
bool check_gordon(const GordonTriple& triple, std::span<const double> x,
                  std::span<const double> y, double slack = 1e-9);

}  // namespace phirm
