#include "iqbb/subtree_index.hpp"

#include <algorithm>

namespace iqbb {

SubtreeIndex::SubtreeIndex(const TreeOracle& base, const LocalHcost& hc, NodeId subroot)
    : base_(base), hc_(hc), subroot_(subroot) {
  frontier_.push(Entry{hc(subroot), subroot});
}

void SubtreeIndex::expand_one() {
  const Entry e = frontier_.top();
  frontier_.pop();
  enumerated_.push_back(e.path_max);
  for (const NodeId& k : base_.branch(e.node)) {
    frontier_.push(Entry{std::max(e.path_max, hc_(k)), k});
  }
}

std::uint64_t SubtreeIndex::count_below(Hcost t, std::uint64_t cap) {
  // while the frontier minimum is below t, every enumerated value is too
  while (!frontier_.empty() && frontier_.top().path_max < t && enumerated_.size() <= cap) {
    expand_one();
  }
  const auto below = static_cast<std::uint64_t>(
      std::lower_bound(enumerated_.begin(), enumerated_.end(), t) - enumerated_.begin());
  return std::min(below, cap + 1);
}

}  // namespace iqbb
