#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "iqbb/classical_search.hpp"
#include "iqbb/quantum_primitives.hpp"
#include "iqbb/subtree_gen.hpp"

namespace iqbb::testing {

// Recomputes every kthcost/nextcost answer from the sorted hcost list of the
// subtree (full traversal) and probes the invalid-node placement at each
// outer-loop boundary against the classical pop order.
class ShadowChecker final : public SubtreeObserver {
 public:
  ShadowChecker(const TreeOracle& tree, const LocalHcost& hc, EstimatorMode mode,
                const ExplorationTrace* full = nullptr)
      : tree_(tree), hc_(hc), mode_(mode) {
    if (full) {
      for (std::uint64_t i = 0; i < full->q(); ++i) position_[full->pop(i)] = i;
      order_ = full;
    }
  }

  void on_kthcost(const NodeId& subroot, double k, double eps, Hcost result) override {
    ++kth_calls;
    const std::vector<Hcost>& s = sorted(subroot);
    const Hcost none = hc_.h_max() + 1;
    bool ok;
    if (k < 0) {
      ok = result == 0;
    } else if (mode_.kind == EstimatorMode::Kind::kExact || k < 1) {
      const auto need = static_cast<std::size_t>(std::floor(k));
      ok = result == (s.size() > need ? s[need] + 1 : none);
    } else {
      const double top = k * (1 + eps) * (1 + eps) + 1;
      const double all = static_cast<double>(s.size());
      if (result == none) {
        ok = all < top;
      } else {
        const double below = static_cast<double>(count_below(s, result));
        ok = below > k && below < top;
      }
    }
    if (!ok) {
      ++mismatches;
      note("kthcost " + subroot.to_string() + " k=" + std::to_string(k) + " got " +
           std::to_string(result));
    }
  }

  void on_nextcost(const NodeId& subroot, Hcost c, Hcost result) override {
    ++next_calls;
    const std::vector<Hcost>& s = sorted(subroot);
    const auto it = std::lower_bound(s.begin(), s.end(), c);
    const Hcost want = it == s.end() ? hc_.h_max() + 1 : *it;
    if (result != want) {
      ++mismatches;
      note("nextcost " + subroot.to_string() + " c=" + std::to_string(c));
    }
  }

  void on_boundary(const NodeId& split, const SubtreeGenState& st) override {
    max_level = std::max({max_level, st.m_side[0], st.m_side[1]});
    if (!order_) return;
    ++boundaries;
    SubtreeCertificate cert;
    cert.split = split;
    cert.c = st.c;
    const CertificateTree view(tree_, hc_, cert);
    const TwoTruncTree sides(tree_, hc_, split, st.c[0], st.c[1]);
    std::unordered_set<NodeId> members;
    for (const NodeId& n : collect_nodes(view)) members.insert(n);
    std::uint64_t first_missing = order_->q();
    for (std::uint64_t i = 0; i < order_->q(); ++i) {
      if (!members.count(order_->pop(i))) {
        first_missing = i;
        break;
      }
    }
    const int other = 1 - st.current;
    for (const NodeId& n : members) {
      if (position_.at(n) <= first_missing) continue;
      if (n.depth() <= split.depth() || sides.side_of(n) != other) {
        ++invariant_breaks;
        break;
      }
    }
  }

  std::uint64_t kth_calls = 0;
  std::uint64_t next_calls = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t boundaries = 0;
  std::uint64_t invariant_breaks = 0;
  int max_level = 0;
  std::vector<std::string> notes;

 private:
  static std::uint64_t count_below(const std::vector<Hcost>& s, Hcost c) {
    return static_cast<std::uint64_t>(std::lower_bound(s.begin(), s.end(), c) - s.begin());
  }

  const std::vector<Hcost>& sorted(const NodeId& subroot) {
    auto it = cache_.find(subroot);
    if (it != cache_.end()) return it->second;
    std::vector<Hcost> values;
    std::vector<NodeId> stack{subroot};
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      values.push_back(hc_(n));
      for (const NodeId& k : tree_.branch(n)) stack.push_back(k);
    }
    std::sort(values.begin(), values.end());
    return cache_.emplace(subroot, std::move(values)).first->second;
  }

  void note(std::string s) {
    if (notes.size() < 10) notes.push_back(std::move(s));
  }

  const TreeOracle& tree_;
  const LocalHcost& hc_;
  EstimatorMode mode_;
  const ExplorationTrace* order_ = nullptr;
  std::unordered_map<NodeId, std::uint64_t> position_;
  std::unordered_map<NodeId, std::vector<Hcost>> cache_;
};

}  // namespace iqbb::testing
