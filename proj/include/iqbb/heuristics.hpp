#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iqbb/tree_oracle.hpp"

namespace iqbb {

enum class HeuristicKind { kDepthFirst, kCostBased, kAStar, kCustom };

HeuristicKind parse_heuristic(std::string_view name);
std::string_view heuristic_name(HeuristicKind kind);

// Node ranking computed from O(1) queries at the node, one transcript entry
// per strict ancestor, and the depth.
struct BranchLocalHeuristic {
  using Local = std::function<double(const TreeOracle&, const NodeId&)>;
  // Transcript entry recorded for the child at `position` of branch(parent).
  using Parent = std::function<double(const TreeOracle&, const NodeId& parent, int position)>;
  using Combine = std::function<double(double local, std::span<const double> transcript, int depth)>;

  HeuristicKind kind = HeuristicKind::kCustom;
  Local hlocal;
  Parent hparent;
  Combine combine;
  double h_max_real = 1.0;  // bound on combined values, all >= 0
  double precision = 1.0;   // quantization step
  bool uses_transcript = true;
};

BranchLocalHeuristic cost_based(const TreeBounds& bounds);
// cost(N) + weight * depth(N)
BranchLocalHeuristic a_star(const TreeBounds& bounds, double weight = 1.0);
// Preorder with children visited cheapest first, ties by index.
BranchLocalHeuristic depth_first(const TreeBounds& bounds);
BranchLocalHeuristic make_heuristic(HeuristicKind kind, const TreeBounds& bounds);

struct LiftedNode {
  NodeId node;
  int depth = 0;
  std::vector<double> transcript;  // length == depth
};

// Same node set and branch as the base; records each child's transcript when
// its parent is branched. Thread-safe.
class LiftedTree final : public TreeOracle {
 public:
  LiftedTree(const TreeOracle& base, BranchLocalHeuristic h);

  NodeId root() const override { return base_.root(); }
  bool empty() const override { return base_.empty(); }
  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override { return base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

  LiftedNode lift(const NodeId& n) const;
  // Unquantized heuristic value of n.
  double value(const NodeId& n) const;
  const BranchLocalHeuristic& heuristic() const { return h_; }

 private:
  const std::vector<double>& transcript(const NodeId& n) const;

  const TreeOracle& base_;
  BranchLocalHeuristic h_;
  mutable std::mutex mu_;
  mutable std::unordered_map<NodeId, std::vector<double>> transcripts_;
};

// Positive integer code of v: floor(v / p) + 1. Rejects p <= 0 and v < 0.
Hcost quantize(double v, double p);
std::vector<Hcost> quantize(std::span<const double> values, double p);
Hcost quantized_bound(double h_max_real, double p);

struct LocalReduction {
  std::unique_ptr<LiftedTree> tree;
  LocalHcost hcost;
};

// Local integer ranking whose best-first order on the lifted tree equals the
// heuristic's order on the base tree.
LocalReduction reduce_to_local(const BranchLocalHeuristic& h, const TreeOracle& oracle);

// Ranks by (value, shortlex path) via value * 2^w + rank with w = depth_bound + 1.
// Values already distinct are returned unchanged. Throws std::overflow_error
// when the composed key does not fit in 64 bits.
LocalHcost total_order(const LocalHcost& hc, int depth_bound);

}  // namespace iqbb
