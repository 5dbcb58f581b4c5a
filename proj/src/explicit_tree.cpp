#include "iqbb/explicit_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace iqbb {

ExplicitTree::ExplicitTree() : ExplicitTree(1, 1) {}

ExplicitTree::ExplicitTree(Cost root_cost, Hcost root_hcost) {
  ExplicitNode root;
  root.cost = root_cost;
  root.hcost = root_hcost;
  nodes_.push_back(root);
  index_.emplace(NodeId{}, 0);
}

std::int32_t ExplicitTree::add_child(std::int32_t parent, Cost cost, Hcost hcost, bool synthetic) {
  ExplicitNode& p = nodes_.at(parent);
  if (p.child_count == 2) throw std::invalid_argument("ExplicitTree: node already has two children");
  ExplicitNode n;
  n.id = p.id.child(p.child_count);
  n.cost = cost;
  n.hcost = hcost;
  n.parent = parent;
  n.synthetic = synthetic;
  const auto idx = static_cast<std::int32_t>(nodes_.size());
  p.child[p.child_count++] = idx;
  depth_ = std::max(depth_, n.id.depth());
  index_.emplace(n.id, idx);
  nodes_.push_back(n);
  return idx;
}

const ExplicitNode& ExplicitTree::at(const NodeId& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) throw std::out_of_range("ExplicitTree: unknown node " + n.to_string());
  return nodes_[it->second];
}

Children ExplicitTree::branch(const NodeId& n) const {
  const ExplicitNode& e = at(n);
  Children out;
  for (int i = 0; i < e.child_count; ++i) out.push_back(nodes_[e.child[i]].id);
  return out;
}

Cost ExplicitTree::cost(const NodeId& n) const { return at(n).cost; }

Hcost ExplicitTree::hcost(const NodeId& n) const { return at(n).hcost; }

bool ExplicitTree::synthetic(const NodeId& n) const { return at(n).synthetic; }

TreeBounds ExplicitTree::bounds() const {
  TreeBounds b;
  b.depth = depth_;
  b.size = nodes_.size();
  b.c_max = 1;
  for (const ExplicitNode& e : nodes_) b.c_max = std::max(b.c_max, e.cost);
  return b;
}

LocalHcost ExplicitTree::stored_hcost() const {
  Hcost h_max = 1;
  std::vector<Hcost> values;
  values.reserve(nodes_.size());
  for (const ExplicitNode& e : nodes_) {
    h_max = std::max(h_max, e.hcost);
    values.push_back(e.hcost);
  }
  std::sort(values.begin(), values.end());
  const bool distinct = std::adjacent_find(values.begin(), values.end()) == values.end();
  return LocalHcost([this](const NodeId& n) { return hcost(n); }, h_max, distinct);
}

std::optional<std::int32_t> ExplicitTree::index_of(const NodeId& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace iqbb
