#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "iqbb/node_id.hpp"

namespace iqbb {

// Ordered list of at most two children.
class Children {
 public:
  Children() = default;
  explicit Children(const NodeId& only) : ids_{only, NodeId{}}, count_(1) {}
  Children(const NodeId& first, const NodeId& second) : ids_{first, second}, count_(2) {}

  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const NodeId& operator[](int i) const { return ids_[i]; }
  const NodeId* begin() const { return ids_.data(); }
  const NodeId* end() const { return ids_.data() + count_; }

  void push_back(const NodeId& n) {
    if (count_ >= 2) throw std::length_error("Children: at most two children");
    ids_[count_++] = n;
  }

  friend bool operator==(const Children& a, const Children& b) {
    if (a.count_ != b.count_) return false;
    for (int i = 0; i < a.count_; ++i) {
      if (a.ids_[i] != b.ids_[i]) return false;
    }
    return true;
  }

 private:
  std::array<NodeId, 2> ids_{};
  int count_ = 0;
};

struct TreeBounds {
  int depth = 0;           // every root-to-leaf path has at most this many edges
  std::uint64_t size = 1;  // upper bound on node count
  Cost c_max = 1;          // upper bound on cost values
};

// Finite rooted binary tree given by its branch and cost functions.
class TreeOracle {
 public:
  virtual ~TreeOracle() = default;

  virtual NodeId root() const { return NodeId{}; }
  virtual bool empty() const { return false; }
  virtual Children branch(const NodeId& n) const = 0;
  virtual Cost cost(const NodeId& n) const = 0;
  virtual TreeBounds bounds() const = 0;
};

enum class Primitive { kTreeSearch, kTreeSize, kMinLeaf };

std::string_view primitive_name(Primitive p);

struct ChargeEntry {
  Primitive primitive;
  double size_param;  // T, T0 or T depending on the primitive
  int depth;
  double delta;
  double charge;
};

// Per-run query tally. Not shared between concurrent runs.
struct QueryLedger {
  std::uint64_t branch_calls = 0;
  std::uint64_t cost_calls = 0;
  std::uint64_t hcost_calls = 0;
  double charged_quantum = 0.0;
  std::vector<ChargeEntry> charge_breakdown;

  void charge(const ChargeEntry& entry) {
    charged_quantum += entry.charge;
    charge_breakdown.push_back(entry);
  }
};

// Forwards to a base oracle and counts branch/cost calls.
class CountingOracle final : public TreeOracle {
 public:
  CountingOracle(const TreeOracle& base, QueryLedger& ledger) : base_(base), ledger_(ledger) {}

  NodeId root() const override { return base_.root(); }
  bool empty() const override { return base_.empty(); }
  Children branch(const NodeId& n) const override {
    ++ledger_.branch_calls;
    return base_.branch(n);
  }
  Cost cost(const NodeId& n) const override {
    ++ledger_.cost_calls;
    return base_.cost(n);
  }
  TreeBounds bounds() const override { return base_.bounds(); }

 private:
  const TreeOracle& base_;
  QueryLedger& ledger_;
};

// Integer ranking function on nodes with values in [1, h_max].
class LocalHcost {
 public:
  using Evaluator = std::function<Hcost(const NodeId&)>;

  LocalHcost() = default;
  LocalHcost(Evaluator eval, Hcost h_max, bool distinct = false)
      : eval_(std::move(eval)), h_max_(h_max), distinct_(distinct) {}

  Hcost operator()(const NodeId& n) const { return eval_(n); }
  Hcost h_max() const { return h_max_; }
  // True when no two nodes share a value.
  bool distinct() const { return distinct_; }

 private:
  Evaluator eval_;
  Hcost h_max_ = 1;
  bool distinct_ = false;
};

// Wraps hc so each evaluation increments ledger.hcost_calls.
LocalHcost counted(const LocalHcost& hc, QueryLedger& ledger);

// Depth-first walk of every node reachable from oracle.root().
template <typename Visit>
void for_each_node(const TreeOracle& oracle, Visit&& visit) {
  if (oracle.empty()) return;
  std::vector<NodeId> stack{oracle.root()};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    Children kids = oracle.branch(n);
    visit(n, kids);
    for (int i = kids.size() - 1; i >= 0; --i) stack.push_back(kids[i]);
  }
}

std::vector<NodeId> collect_nodes(const TreeOracle& oracle);

// Throws BnbConditionViolation when some child is cheaper than its parent.
void check_bnb_condition(const TreeOracle& oracle);

}  // namespace iqbb
