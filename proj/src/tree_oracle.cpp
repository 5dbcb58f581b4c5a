#include "iqbb/tree_oracle.hpp"

#include "iqbb/errors.hpp"

namespace iqbb {

std::string_view primitive_name(Primitive p) {
  switch (p) {
    case Primitive::kTreeSearch:
      return "qtsearch";
    case Primitive::kTreeSize:
      return "qtsize";
    case Primitive::kMinLeaf:
      return "qtminleaf";
  }
  return "unknown";
}

LocalHcost counted(const LocalHcost& hc, QueryLedger& ledger) {
  return LocalHcost(
      [hc, &ledger](const NodeId& n) {
        ++ledger.hcost_calls;
        return hc(n);
      },
      hc.h_max(), hc.distinct());
}

std::vector<NodeId> collect_nodes(const TreeOracle& oracle) {
  std::vector<NodeId> out;
  for_each_node(oracle, [&](const NodeId& n, const Children&) { out.push_back(n); });
  return out;
}

void check_bnb_condition(const TreeOracle& oracle) {
  for_each_node(oracle, [&](const NodeId& n, const Children& kids) {
    const Cost c = oracle.cost(n);
    for (const NodeId& k : kids) {
      if (oracle.cost(k) < c) {
        throw BnbConditionViolation("child " + k.to_string() + " cheaper than parent " +
                                    n.to_string());
      }
    }
  });
}

}  // namespace iqbb
