#pragma once

#include <span>
#include <vector>

#include "phirm/odp.h"

namespace phirm {

// Action transformation: maps each source action to a mixed action. Stored
// column-major, column a = the image of action a.
class Transformation {
 public:
  static Transformation identity(int num_actions);
  // Every source action maps to delta_target.
  static Transformation constant(int num_actions, int target);
  // Identity except source `from` maps to delta_to.
  static Transformation internal(int num_actions, int from, int to);
  // Pure map a -> delta_{targets[a]}.
  static Transformation pure(const std::vector<int>& targets);
  static Transformation from_columns(const std::vector<MixedAction>& columns);

  int num_actions() const { return n_; }
  // entry(i, a) = probability that action a is mapped to action i.
  double entry(int row, int col) const { return data_[col * n_ + row]; }
  std::span<const double> column(int a) const {
    return std::span<const double>(data_.data() + a * n_, n_);
  }
  const std::vector<double>& matrix() const { return data_; }

  // True if column a equals delta_a entrywise within tol.
  bool fixes(int a, double tol = 1e-12) const;

 private:
  Transformation(int n, std::vector<double> data)
      : n_(n), data_(std::move(data)) {}

  int n_;
  std::vector<double> data_;  // column-major n_ x n_
};

// Linear extension of phi to mixed actions: out = sum_a q(a) * phi(a).
MixedAction apply_linear(const Transformation& phi, const MixedAction& q);
void apply_linear(const Transformation& phi, std::span<const double> q,
                  std::span<double> out);

enum class FamilyKind { kExternal, kInternal, kSwap, kCustom };

// Finite set of transformations over a fixed action set. Member order is
// canonical per kind and part of the public contract (regret vectors and
// matcher weights are indexed by it):
//   external: constant maps by target action 0..n-1
//   internal: identity first, then pairs (from, to), from != to, lexicographic
//   swap:     all pure maps, lexicographic in (target(0), ..., target(n-1))
struct TransformationFamily {
  FamilyKind kind;
  int num_actions;
  std::vector<Transformation> members;

  int size() const { return static_cast<int>(members.size()); }
};

// Builds one of the named families. Throws std::invalid_argument for
// num_actions < 2 and std::length_error for swap with num_actions > 6.
TransformationFamily build_family(FamilyKind kind, int num_actions);

// Wraps an explicit member list (must be nonempty and share one action set).
TransformationFamily custom_family(std::vector<Transformation> members);

// Largest number of members any single action activates, i.e.
// max_a |{phi in family : phi(a) != delta_a}|.
int maximal_activation(const TransformationFamily& family);

}  // namespace phirm
