#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "iqbb/heuristics.hpp"
#include "iqbb/tree_oracle.hpp"

namespace iqbb {

struct TraceStep {
  NodeId node;
  std::optional<Cost> incumbent;
  std::optional<Cost> best_bound;  // none once the active set is empty
  std::optional<std::int64_t> gap;
};

// Pop sequence of a best-first run; pops[0] is the root.
struct ExplorationTrace {
  std::vector<TraceStep> steps;
  int d_max_seen = 0;  // relative to the explored root

  std::uint64_t q() const { return steps.size(); }
  const NodeId& pop(std::size_t i) const { return steps[i].node; }
};

struct BnbResult {
  NodeId leaf;
  Cost cost = 0;
  ExplorationTrace trace;
};

// Best-first branch and bound keyed by hc (ties by path). Leaves are detected
// on discovery. Stops once incumbent - best_bound <= eps or nothing is active.
// Throws BnbConditionViolation on a child cheaper than its parent.
BnbResult classical_bnb(const TreeOracle& oracle, const LocalHcost& hc, Cost eps,
                        QueryLedger& ledger);

// Same search keyed by the named heuristic, reduced to a local hcost with
// ties broken by path.
BnbResult classical_bnb(const TreeOracle& oracle, HeuristicKind heuristic, Cost eps,
                        QueryLedger& ledger);

using MarkFn = std::function<bool(const NodeId&)>;

struct SearchResult {
  std::optional<NodeId> marked;
  ExplorationTrace trace;
};

// Pops in hc order and returns the first popped node with f = 1.
SearchResult classical_tree_search(const TreeOracle& oracle, const LocalHcost& hc, const MarkFn& f,
                                   QueryLedger& ledger);

// Complete pop order of the tree under hc.
ExplorationTrace full_trace(const TreeOracle& oracle, const LocalHcost& hc);

std::unordered_set<NodeId> first_k(const ExplorationTrace& trace, std::uint64_t k);

}  // namespace iqbb
