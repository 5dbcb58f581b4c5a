#include "iqbb/binarize.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

namespace iqbb {

std::int32_t GeneralTree::add_child(std::int32_t parent, Cost cost, Hcost hcost) {
  const auto idx = static_cast<std::int32_t>(nodes.size());
  nodes.push_back(Node{cost, hcost, {}});
  nodes.at(parent).children.push_back(idx);
  return idx;
}

int GeneralTree::max_degree() const {
  std::size_t deg = 0;
  for (const Node& n : nodes) deg = std::max(deg, n.children.size());
  return static_cast<int>(deg);
}

namespace {

struct Builder {
  const GeneralTree& in;
  BinarizedTree out;

  std::int32_t attach(std::int32_t parent_out, std::int32_t original) {
    const auto& n = in.nodes[original];
    const std::int32_t idx = out.tree.add_child(parent_out, n.cost, n.hcost);
    out.original_of.push_back(original);
    return idx;
  }

  // Hangs the original children in `group` below parent_out, fanning out
  // through synthetic copies of `owner` when more than two remain.
  void fan(std::int32_t parent_out, std::int32_t owner, std::span<const std::int32_t> group,
           std::vector<std::pair<std::int32_t, std::int32_t>>& pending) {
    if (group.size() <= 2) {
      for (std::int32_t c : group) pending.emplace_back(attach(parent_out, c), c);
      return;
    }
    const std::size_t half = (group.size() + 1) / 2;
    for (auto part : {group.first(half), group.subspan(half)}) {
      if (part.size() == 1) {
        pending.emplace_back(attach(parent_out, part[0]), part[0]);
      } else {
        const auto& o = in.nodes[owner];
        const std::int32_t s = out.tree.add_child(parent_out, o.cost, o.hcost, true);
        out.original_of.push_back(-1);
        fan(s, owner, part, pending);
      }
    }
  }
};

}  // namespace

BinarizedTree binarize(const GeneralTree& input, int deg) {
  if (deg < 2) throw std::invalid_argument("binarize: deg must be at least 2");
  if (input.max_degree() > deg) throw std::invalid_argument("binarize: out-degree exceeds deg");
  Builder b{input, BinarizedTree{ExplicitTree(input.nodes[0].cost, input.nodes[0].hcost), {0}}};
  std::vector<std::pair<std::int32_t, std::int32_t>> pending{{0, 0}};
  while (!pending.empty()) {
    auto [out_idx, orig] = pending.back();
    pending.pop_back();
    b.fan(out_idx, orig, input.nodes[orig].children, pending);
  }
  return std::move(b.out);
}

}  // namespace iqbb
