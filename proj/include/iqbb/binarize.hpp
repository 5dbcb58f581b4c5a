#pragma once

#include <cstdint>
#include <vector>

#include "iqbb/explicit_tree.hpp"

namespace iqbb {

// Rooted tree with arbitrary out-degree; node 0 is the root.
struct GeneralTree {
  struct Node {
    Cost cost = 1;
    Hcost hcost = 1;
    std::vector<std::int32_t> children;
  };
  std::vector<Node> nodes{Node{}};

  std::int32_t add_child(std::int32_t parent, Cost cost, Hcost hcost);
  int max_degree() const;
};

struct BinarizedTree {
  ExplicitTree tree;
  // Original node index for each explicit index; -1 for synthetic nodes.
  std::vector<std::int32_t> original_of;
};

// Replaces each node with more than two children by a balanced binary fan of
// synthetic nodes carrying the parent's cost and hcost. Rejects deg < 2 and
// inputs whose out-degree exceeds deg.
BinarizedTree binarize(const GeneralTree& input, int deg);

}  // namespace iqbb
