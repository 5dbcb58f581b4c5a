#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "iqbb/heuristics.hpp"
#include "iqbb/quantum_primitives.hpp"
#include "iqbb/subtree_gen.hpp"

namespace iqbb {

struct SolverParams {
  HeuristicKind heuristic = HeuristicKind::kCostBased;
  Cost eps = 0;
  double delta = 0.1;
  double tree_size = 0;  // upper bound T; 0 takes the oracle's bound
  int m_cap = -1;        // -1 takes ceil(log2 T) + 2
  ChargePolicy policy{};
  EstimatorMode mode{};
};

// State of one pass of the doubling loop.
struct IterationRecord {
  int m = 0;
  std::uint64_t certificate_nodes = 0;
  Cost bound1 = 0;
  Cost bound2 = 0;
  Cost best_bound = 0;
  std::optional<Cost> incumbent;  // none while every certificate leaf is internal in the tree
  double charge = 0;              // charged during this pass
  int cuts_found = 0;
};

struct IqbbResult {
  NodeId leaf;
  Cost cost = 0;
  int final_m = 0;
  bool capped = false;  // m_cap reached without the gap check passing
  std::vector<int> cuts;  // cuts applied to the tree that holds leaf
  std::vector<IterationRecord> iterations;
};

struct IqtsResult {
  std::optional<NodeId> marked;
  int final_m = 0;
};

// Derived quantities shared by the solvers.
struct SolverSetup {
  int depth = 1;
  double tree_size = 2;
  double log_t = 1;  // log2 of tree_size, at least 1
  int m_cap = 0;
  Cost c_max = 1;
};

SolverSetup solver_setup(const TreeOracle& oracle, const SolverParams& params);

// Doubling search for a marked node over derived subtrees.
IqtsResult run_iqts(const TreeOracle& oracle, const MarkFn& f, const SolverParams& params,
                    QueryLedger& ledger);

// Doubling branch and bound: returns a leaf within eps of the minimum leaf cost.
IqbbResult run_iqbb(const TreeOracle& oracle, const SolverParams& params, QueryLedger& ledger);

// Global cutting planes for branch and cut. Cut ids are small nonnegative integers.
struct CutConfig {
  int p = 0;  // maximum number of cut searches per pass
  // Id of a global cut detected at n under the given applied cuts, or none.
  std::function<std::optional<int>(const NodeId& n, const std::vector<int>& applied)> cp;
  // Tree with the given cuts added to every relaxation; must outlive the call that uses it.
  std::function<const TreeOracle&(const std::vector<int>& applied)> apply;
};

IqbbResult run_iqbc(const TreeOracle& oracle, const CutConfig& cuts, const SolverParams& params,
                    QueryLedger& ledger);

// Tree view with per-node branch override; used for the derived oracles.
class DerivedOracle final : public TreeOracle {
 public:
  using BranchFn = std::function<Children(const NodeId&)>;
  using CostOverride = std::function<Cost(const NodeId&)>;

  DerivedOracle(const TreeOracle& base, BranchFn branch, CostOverride cost = {})
      : base_(base), branch_(std::move(branch)), cost_(std::move(cost)) {}

  NodeId root() const override { return base_.root(); }
  bool empty() const override { return base_.empty(); }
  Children branch(const NodeId& n) const override { return branch_(n); }
  Cost cost(const NodeId& n) const override { return cost_ ? cost_(n) : base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

 private:
  const TreeOracle& base_;
  BranchFn branch_;
  CostOverride cost_;
};

// Evaluation of one certificate: the derived oracles and the three minimum-leaf calls.
IterationRecord evaluate_certificate(QuantumEmulator& emu, const TreeOracle& tree,
                                     const TreeOracle& certificate, const SolverSetup& setup,
                                     double t_bound, double delta, NodeId* incumbent_leaf);

}  // namespace iqbb
