#include "phirm/transforms.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phirm {

namespace {

void check_action(int n, int a, const char* what) {
  if (a < 0 || a >= n)
    throw std::invalid_argument(std::string(what) + ": action out of range");
}

}  // namespace

Transformation Transformation::identity(int num_actions) {
  if (num_actions < 1)
    throw std::invalid_argument("Transformation::identity: bad size");
  std::vector<double> data(
      static_cast<std::size_t>(num_actions) * num_actions, 0.0);
  for (int a = 0; a < num_actions; ++a) data[a * num_actions + a] = 1.0;
  return Transformation(num_actions, std::move(data));
}

Transformation Transformation::constant(int num_actions, int target) {
  check_action(num_actions, target, "Transformation::constant");
  std::vector<double> data(
      static_cast<std::size_t>(num_actions) * num_actions, 0.0);
  for (int a = 0; a < num_actions; ++a) data[a * num_actions + target] = 1.0;
  return Transformation(num_actions, std::move(data));
}

Transformation Transformation::internal(int num_actions, int from, int to) {
  check_action(num_actions, from, "Transformation::internal");
  check_action(num_actions, to, "Transformation::internal");
  if (from == to)
    throw std::invalid_argument("Transformation::internal: from == to");
  Transformation t = identity(num_actions);
  t.data_[from * num_actions + from] = 0.0;
  t.data_[from * num_actions + to] = 1.0;
  return t;
}

Transformation Transformation::pure(const std::vector<int>& targets) {
  const int n = static_cast<int>(targets.size());
  if (n < 1) throw std::invalid_argument("Transformation::pure: empty map");
  std::vector<double> data(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) {
    check_action(n, targets[a], "Transformation::pure");
    data[a * n + targets[a]] = 1.0;
  }
  return Transformation(n, std::move(data));
}

Transformation Transformation::from_columns(
    const std::vector<MixedAction>& columns) {
  const int n = static_cast<int>(columns.size());
  if (n < 1)
    throw std::invalid_argument("Transformation::from_columns: no columns");
  std::vector<double> data(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (columns[a].size() != n)
      throw std::invalid_argument(
          "Transformation::from_columns: column arity mismatch");
    for (int i = 0; i < n; ++i) data[a * n + i] = columns[a][i];
  }
  return Transformation(n, std::move(data));
}

bool Transformation::fixes(int a, double tol) const {
  for (int i = 0; i < n_; ++i) {
    const double want = (i == a) ? 1.0 : 0.0;
    if (std::abs(entry(i, a) - want) > tol) return false;
  }
  return true;
}

void apply_linear(const Transformation& phi, std::span<const double> q,
                  std::span<double> out) {
  const int n = phi.num_actions();
  if (static_cast<int>(q.size()) != n || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("apply_linear: arity mismatch");
  for (int i = 0; i < n; ++i) out[i] = 0.0;
  for (int a = 0; a < n; ++a) {
    const double qa = q[a];
    if (qa == 0.0) continue;
    const std::span<const double> col = phi.column(a);
    for (int i = 0; i < n; ++i) out[i] += qa * col[i];
  }
}

MixedAction apply_linear(const Transformation& phi, const MixedAction& q) {
  std::vector<double> out(phi.num_actions());
  apply_linear(phi, q.probs(), out);
  // Rescue tiny rounding so the result still validates as a distribution.
  double sum = 0.0;
  for (double v : out) sum += v;
  if (sum > 0.0)
    for (double& v : out) v /= sum;
  return MixedAction(std::move(out));
}

TransformationFamily build_family(FamilyKind kind, int num_actions) {
  if (num_actions < 2)
    throw std::invalid_argument("build_family: num_actions must be >= 2");
  TransformationFamily family;
  family.kind = kind;
  family.num_actions = num_actions;
  switch (kind) {
    case FamilyKind::kExternal:
      for (int target = 0; target < num_actions; ++target)
        family.members.push_back(Transformation::constant(num_actions, target));
      break;
    case FamilyKind::kInternal:
      family.members.push_back(Transformation::identity(num_actions));
      for (int from = 0; from < num_actions; ++from)
        for (int to = 0; to < num_actions; ++to)
          if (from != to)
            family.members.push_back(
                Transformation::internal(num_actions, from, to));
      break;
    case FamilyKind::kSwap: {
      if (num_actions > 6)
        throw std::length_error(
            "build_family: swap family grows as n^n, refusing num_actions > 6");
      long total = 1;
      for (int a = 0; a < num_actions; ++a) total *= num_actions;
      std::vector<int> targets(num_actions);
      for (long code = 0; code < total; ++code) {
        long rest = code;
        // Most significant digit drives target(0), so the order is
        // lexicographic in (target(0), ..., target(n-1)).
        for (int a = num_actions - 1; a >= 0; --a) {
          targets[a] = static_cast<int>(rest % num_actions);
          rest /= num_actions;
        }
        family.members.push_back(Transformation::pure(targets));
      }
      break;
    }
    case FamilyKind::kCustom:
      throw std::invalid_argument(
          "build_family: custom families come from custom_family()");
  }
  return family;
}

TransformationFamily custom_family(std::vector<Transformation> members) {
  if (members.empty())
    throw std::invalid_argument("custom_family: empty member list");
  const int n = members.front().num_actions();
  for (const Transformation& t : members)
    if (t.num_actions() != n)
      throw std::invalid_argument("custom_family: mixed action set sizes");
  TransformationFamily family;
  family.kind = FamilyKind::kCustom;
  family.num_actions = n;
  family.members = std::move(members);
  return family;
}

int maximal_activation(const TransformationFamily& family) {
  if (family.members.empty())
    throw std::invalid_argument("maximal_activation: empty family");
  int best = 0;
  for (int a = 0; a < family.num_actions; ++a) {
    int active = 0;
    for (const Transformation& t : family.members)
      if (!t.fixes(a)) ++active;
    if (active > best) best = active;
  }
  return best;
}

}  // namespace phirm
