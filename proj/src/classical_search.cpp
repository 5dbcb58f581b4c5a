#include "iqbb/classical_search.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "iqbb/errors.hpp"

namespace iqbb {

namespace {

struct Active {
  Hcost key;
  NodeId node;
  Cost cost;
  Children kids;

  bool operator>(const Active& o) const {
    if (key != o.key) return key > o.key;
    return node > o.node;
  }
};

using Frontier = std::priority_queue<Active, std::vector<Active>, std::greater<>>;

}  // namespace

BnbResult classical_bnb(const TreeOracle& base, const LocalHcost& hc, Cost eps,
                        QueryLedger& ledger) {
  const CountingOracle oracle(base, ledger);
  const LocalHcost key = counted(hc, ledger);
  BnbResult out;
  std::optional<Cost> incumbent;
  std::multiset<Cost> active_costs;
  Frontier frontier;
  const int top = oracle.root().depth();

  auto discover = [&](const NodeId& n, Cost c) {
    Children kids = oracle.branch(n);
    if (kids.empty() && (!incumbent || c < *incumbent || (c == *incumbent && n < out.leaf))) {
      incumbent = c;
      out.leaf = n;
    }
    active_costs.insert(c);
    frontier.push(Active{key(n), n, c, kids});
  };

  discover(oracle.root(), oracle.cost(oracle.root()));
  while (!frontier.empty()) {
    Active a = frontier.top();
    frontier.pop();
    active_costs.erase(active_costs.find(a.cost));
    for (const NodeId& k : a.kids) {
      const Cost ck = oracle.cost(k);
      if (ck < a.cost) {
        throw BnbConditionViolation("child " + k.to_string() + " cheaper than parent " +
                                    a.node.to_string());
      }
      discover(k, ck);
    }
    TraceStep step{a.node, incumbent, std::nullopt, std::nullopt};
    if (!active_costs.empty()) step.best_bound = *active_costs.begin();
    if (incumbent) {
      step.gap = step.best_bound
                     ? static_cast<std::int64_t>(*incumbent) - static_cast<std::int64_t>(*step.best_bound)
                     : 0;
    }
    out.trace.d_max_seen = std::max(out.trace.d_max_seen, a.node.depth() - top);
    out.trace.steps.push_back(step);
    if (step.gap && *step.gap <= static_cast<std::int64_t>(eps)) break;
  }
  out.cost = *incumbent;
  return out;
}

BnbResult classical_bnb(const TreeOracle& oracle, HeuristicKind heuristic, Cost eps,
                        QueryLedger& ledger) {
  const LocalReduction local = reduce_to_local(make_heuristic(heuristic, oracle.bounds()), oracle);
  return classical_bnb(*local.tree, total_order(local.hcost, oracle.bounds().depth), eps, ledger);
}

SearchResult classical_tree_search(const TreeOracle& base, const LocalHcost& hc, const MarkFn& f,
                                   QueryLedger& ledger) {
  const CountingOracle oracle(base, ledger);
  const LocalHcost key = counted(hc, ledger);
  SearchResult out;
  if (oracle.empty()) return out;
  const int top = oracle.root().depth();
  Frontier frontier;
  frontier.push(Active{key(oracle.root()), oracle.root(), 0, {}});
  while (!frontier.empty()) {
    const Active a = frontier.top();
    frontier.pop();
    out.trace.steps.push_back(TraceStep{a.node, std::nullopt, std::nullopt, std::nullopt});
    out.trace.d_max_seen = std::max(out.trace.d_max_seen, a.node.depth() - top);
    if (f(a.node)) {
      out.marked = a.node;
      return out;
    }
    for (const NodeId& k : oracle.branch(a.node)) frontier.push(Active{key(k), k, 0, {}});
  }
  return out;
}

ExplorationTrace full_trace(const TreeOracle& oracle, const LocalHcost& hc) {
  QueryLedger scratch;
  return classical_tree_search(oracle, hc, [](const NodeId&) { return false; }, scratch).trace;
}

std::unordered_set<NodeId> first_k(const ExplorationTrace& trace, std::uint64_t k) {
  k = std::min<std::uint64_t>(k, trace.q());
  std::unordered_set<NodeId> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) out.insert(trace.pop(i));
  return out;
}

}  // namespace iqbb
