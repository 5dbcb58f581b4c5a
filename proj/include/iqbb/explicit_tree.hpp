#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "iqbb/tree_oracle.hpp"

namespace iqbb {

struct ExplicitNode {
  NodeId id;
  Cost cost = 1;
  Hcost hcost = 1;
  std::int32_t parent = -1;
  std::array<std::int32_t, 2> child{-1, -1};
  int child_count = 0;
  bool synthetic = false;  // inserted by binarize
};

// Fully materialized binary tree with stored cost and hcost per node.
class ExplicitTree final : public TreeOracle {
 public:
  ExplicitTree();  // single root with cost 1, hcost 1
  ExplicitTree(Cost root_cost, Hcost root_hcost);

  // Appends a child below parent index; returns the new index.
  std::int32_t add_child(std::int32_t parent, Cost cost, Hcost hcost, bool synthetic = false);

  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override;
  TreeBounds bounds() const override;

  Hcost hcost(const NodeId& n) const;
  bool synthetic(const NodeId& n) const;
  // Stored hcost as a ranking; distinct() reflects the stored values.
  LocalHcost stored_hcost() const;

  std::optional<std::int32_t> index_of(const NodeId& n) const;
  const ExplicitNode& node(std::int32_t i) const { return nodes_[i]; }
  const std::vector<ExplicitNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  void set_hcost(std::int32_t i, Hcost h) { nodes_[i].hcost = h; }
  void set_cost(std::int32_t i, Cost c) { nodes_[i].cost = c; }

 private:
  const ExplicitNode& at(const NodeId& n) const;

  std::vector<ExplicitNode> nodes_;
  std::unordered_map<NodeId, std::int32_t> index_;
  int depth_ = 0;
};

}  // namespace iqbb
