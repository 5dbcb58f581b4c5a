#include <cmath>
#include <limits>

#include "iqbb/errors.hpp"
#include "iqbb/heuristics.hpp"
#include "iqbb/problems.hpp"

namespace iqbb {

SkTree::SkTree(SkInstance inst) : inst_(std::move(inst)) {
  if (inst_.n < 1 || inst_.n > 62) throw InstanceError("sk tree supports 1..62 spins");
  for (int a = 0; a < inst_.n; ++a) {
    for (int b = a + 1; b < inst_.n; ++b) abs_sum_ += std::abs(inst_.j(a, b));
  }
}

Children SkTree::branch(const NodeId& n) const {
  if (n.depth() >= inst_.n) return {};
  return {n.child(0), n.child(1)};
}

Cost SkTree::cost(const NodeId& n) const {
  // fixed pairs add J s s + |J| >= 0 in a fixed order, so a child's sum never drops
  double lift = 0;
  for (int b = 1; b < n.depth(); ++b) {
    for (int a = 0; a < b; ++a) {
      const double j = inst_.j(a, b);
      lift += j * spin(n, a) * spin(n, b) + std::abs(j);
    }
  }
  return quantize(lift, kCostResolution);
}

TreeBounds SkTree::bounds() const {
  TreeBounds b;
  b.depth = inst_.n;
  b.size = (std::uint64_t{1} << (inst_.n + 1)) - 1;
  b.c_max = quantize(2 * abs_sum_, kCostResolution);
  return b;
}

double SkTree::energy(const NodeId& leaf) const {
  double e = 0;
  for (int b = 1; b < inst_.n; ++b) {
    for (int a = 0; a < b; ++a) e += inst_.j(a, b) * spin(leaf, a) * spin(leaf, b);
  }
  return e;
}

std::optional<double> SkTree::leaf_value(const NodeId& leaf) const {
  if (leaf.depth() != inst_.n) return std::nullopt;
  return energy(leaf);
}

double sk_exhaustive(const SkInstance& inst) {
  if (inst.n > 30) throw InstanceError("sk_exhaustive: n too large");
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t states = std::uint64_t{1} << inst.n;
  std::vector<int> s(inst.n);
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    for (int i = 0; i < inst.n; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
    double e = 0;
    for (int b = 1; b < inst.n; ++b) {
      for (int a = 0; a < b; ++a) e += inst.j(a, b) * s[a] * s[b];
    }
    best = std::min(best, e);
  }
  return best;
}

}  // namespace iqbb
