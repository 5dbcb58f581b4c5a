#include "iqbb/truncation.hpp"

#include <stdexcept>

namespace iqbb {

TruncTree::TruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId subroot, Hcost t)
    : base_(base), hc_(hc), subroot_(subroot), t_(t), empty_(hc(subroot) >= t) {}

Children TruncTree::branch(const NodeId& n) const {
  Children out;
  if (empty_) return out;
  for (const NodeId& k : base_.branch(n)) {
    if (hc_(k) < t_) out.push_back(k);
  }
  return out;
}

PTruncTree::PTruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId subroot, Hcost t)
    : base_(base), hc_(hc), subroot_(subroot), t_(t) {}

Children PTruncTree::branch(const NodeId& n) const {
  if (n != subroot_ && hc_(n.parent()) <= t_ && t_ < hc_(n)) return {};
  return base_.branch(n);
}

TwoTruncTree::TwoTruncTree(const TreeOracle& base, const LocalHcost& hc, NodeId root, Hcost t0,
                           Hcost t1)
    : base_(base), hc_(hc), root_(root), t_{t0, t1} {
  const Children kids = base.branch(root);
  if (kids.size() != 2) throw std::invalid_argument("TwoTruncTree: root needs two children");
  const bool swap = hc(kids[1]) < hc(kids[0]);
  side_root_ = swap ? std::array<NodeId, 2>{kids[1], kids[0]}
                    : std::array<NodeId, 2>{kids[0], kids[1]};
  low_bit_ = side_root_[0].bit(root.depth());
}

int TwoTruncTree::side_of(const NodeId& n) const {
  return n.bit(root_.depth()) == low_bit_ ? 0 : 1;
}

Children TwoTruncTree::branch(const NodeId& n) const {
  Children out;
  if (n == root_) {
    for (int s = 0; s < 2; ++s) {
      if (hc_(side_root_[s]) < t_[s]) out.push_back(side_root_[s]);
    }
    // keep base order among surviving children
    if (out.size() == 2 && low_bit_ == 1) out = Children(out[1], out[0]);
    return out;
  }
  const Hcost t = t_[side_of(n)];
  for (const NodeId& k : base_.branch(n)) {
    if (hc_(k) < t) out.push_back(k);
  }
  return out;
}

}  // namespace iqbb
