#pragma once

#include "iqbb/tree_oracle.hpp"

namespace iqbb {

// Nodes x below subroot such that every node on the path subroot..x has hc < t.
// Empty when hc(subroot) >= t.
class TruncTree final : public TreeOracle {
 public:
  TruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId subroot, Hcost t);

  NodeId root() const override { return subroot_; }
  bool empty() const override { return empty_; }
  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override { return base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

  Hcost threshold() const { return t_; }

 private:
  const TreeOracle& base_;
  const LocalHcost& hc_;
  NodeId subroot_;
  Hcost t_;
  bool empty_;
};

// Subtree of subroot where a non-subroot node N with hc(parent) <= t < hc(N)
// has its children suppressed.
class PTruncTree final : public TreeOracle {
 public:
  PTruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId subroot, Hcost t);

  NodeId root() const override { return subroot_; }
  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override { return base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

 private:
  const TreeOracle& base_;
  const LocalHcost& hc_;
  NodeId subroot_;
  Hcost t_;
};

// {root} plus trunc(n0, t0) plus trunc(n1, t1), where n0 is the child of root
// with the smaller hc. The side of a node is read off its path below root.
class TwoTruncTree final : public TreeOracle {
 public:
  TwoTruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId root, Hcost t0, Hcost t1);

  NodeId root() const override { return root_; }
  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override { return base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

  // Child of root playing the role of n0 (side 0) or n1 (side 1).
  const NodeId& side_root(int side) const { return side_root_[side]; }
  // 0 or 1 for nodes strictly below root.
  int side_of(const NodeId& n) const;

 private:
  const TreeOracle& base_;
  const LocalHcost& hc_;
  NodeId root_;
  std::array<NodeId, 2> side_root_;
  std::array<Hcost, 2> t_;
  int low_bit_ = 0;  // path bit at root's depth leading to side 0
};

}  // namespace iqbb
