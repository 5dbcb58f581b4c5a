#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "iqbb/tree_oracle.hpp"

namespace iqbb {

// Lazily enumerates the subtree of subroot in nondecreasing order of path
// maximum hc, so |trunc(subroot, t)| is the number of enumerated values below t.
class SubtreeIndex {
 public:
  SubtreeIndex(const TreeOracle& base, const LocalHcost& hc, NodeId subroot);

  // |trunc(subroot, t)|, capped at cap + 1.
  std::uint64_t count_below(Hcost t, std::uint64_t cap);

  const NodeId& subroot() const { return subroot_; }

 private:
  struct Entry {
    Hcost path_max;
    NodeId node;
    bool operator>(const Entry& o) const {
      if (path_max != o.path_max) return path_max > o.path_max;
      return node > o.node;
    }
  };

  void expand_one();

  const TreeOracle& base_;
  const LocalHcost& hc_;
  NodeId subroot_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier_;
  std::vector<Hcost> enumerated_;  // nondecreasing
};

}  // namespace iqbb
