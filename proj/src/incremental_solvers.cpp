#include "iqbb/incremental_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace iqbb {

SolverSetup solver_setup(const TreeOracle& oracle, const SolverParams& params) {
  const TreeBounds b = oracle.bounds();
  SolverSetup s;
  s.depth = std::max(1, b.depth);
  s.tree_size = std::max(2.0, params.tree_size > 0 ? params.tree_size : static_cast<double>(b.size));
  s.log_t = std::max(1.0, std::log2(s.tree_size));
  s.m_cap = params.m_cap >= 0 ? params.m_cap : static_cast<int>(std::ceil(std::log2(s.tree_size))) + 2;
  s.c_max = b.c_max;
  return s;
}

IterationRecord evaluate_certificate(QuantumEmulator& emu, const TreeOracle& tree,
                                     const TreeOracle& certificate, const SolverSetup& setup,
                                     double t_bound, double delta, NodeId* incumbent_leaf) {
  IterationRecord rec;
  const Cost sentinel = setup.c_max + 1;
  const auto c_max = static_cast<double>(sentinel);
  const CostFn cost = [&tree](const NodeId& n) { return tree.cost(n); };
  rec.bound1 = cost(emu.qtminleaf(certificate, cost, setup.depth, c_max, t_bound, delta));

  // certificate leaves that the tree still branches are not solutions
  const CostFn cost1 = [&](const NodeId& n) {
    if (certificate.branch(n).empty() && !tree.branch(n).empty()) return sentinel;
    return tree.cost(n);
  };
  const NodeId inc = emu.qtminleaf(certificate, cost1, setup.depth, c_max, t_bound, delta);
  const Cost inc_cost = cost1(inc);
  if (inc_cost < sentinel) {
    rec.incumbent = inc_cost;
    if (incumbent_leaf) *incumbent_leaf = inc;
  }

  // partially expanded nodes become leaves
  const DerivedOracle branch2(tree, [&](const NodeId& n) {
    const Children full = tree.branch(n);
    return certificate.branch(n) == full ? full : Children{};
  });
  rec.bound2 = cost(emu.qtminleaf(branch2, cost, setup.depth, c_max, t_bound, delta));
  rec.best_bound = std::min(rec.bound1, rec.bound2);
  return rec;
}

namespace {

// Counting wrapper plus the local ranking of one tree.
struct PreparedTree {
  std::unique_ptr<CountingOracle> counted;
  LocalReduction reduction;
  LocalHcost hcost;

  PreparedTree(const TreeOracle& tree, const SolverParams& params, int depth, QueryLedger& ledger)
      : counted(std::make_unique<CountingOracle>(tree, ledger)),
        reduction(reduce_to_local(make_heuristic(params.heuristic, tree.bounds()), *counted)),
        hcost(total_order(reduction.hcost, depth)) {}

  const TreeOracle& tree() const { return *reduction.tree; }
};

double pow2(int e) { return std::ldexp(1.0, e); }

IqbbResult run_doubling(const TreeOracle& oracle, const CutConfig* cuts, const SolverParams& params,
                        QueryLedger& ledger) {
  const SolverSetup setup = solver_setup(oracle, params);
  QuantumEmulator emu(ledger, params.policy, params.mode);
  const double sub_delta = params.delta / (5.0 * setup.log_t);
  const int p = cuts ? cuts->p : 0;
  std::vector<int> applied;
  const TreeOracle* current = (cuts && cuts->apply) ? &cuts->apply(applied) : &oracle;
  auto prepared = std::make_unique<PreparedTree>(*current, params, setup.depth, ledger);

  IqbbResult out;
  for (int m = 0;; ++m) {
    const double before = ledger.charged_quantum;
    const TreeOracle& tree = prepared->tree();
    const SubtreeCertificate cert = qsubtree_local(tree, prepared->hcost, m, sub_delta, emu);
    const CertificateTree branch1(tree, prepared->hcost, cert);
    NodeId leaf;
    IterationRecord rec =
        evaluate_certificate(emu, tree, branch1, setup, 4.0 * pow2(m), sub_delta, &leaf);
    rec.m = m;
    rec.certificate_nodes = count_nodes(branch1, ~std::uint64_t{0} - 1);
    const bool closed = rec.incumbent && *rec.incumbent <= rec.best_bound + params.eps;
    if (closed || m >= setup.m_cap) {
      rec.charge = ledger.charged_quantum - before;
      out.iterations.push_back(rec);
      if (!rec.incumbent) throw std::logic_error("run_iqbb: no feasible leaf at the iteration cap");
      out.leaf = leaf;
      out.cost = *rec.incumbent;
      out.final_m = m;
      out.capped = !closed;
      out.cuts = applied;
      return out;
    }
    if (p > 0) {
      // up to p searches, each masking the cuts already known
      const double cut_delta = params.delta / (5.0 * p * setup.log_t);
      std::vector<int> found;
      for (int j = 0; j < p; ++j) {
        const MarkFn fresh = [&](const NodeId& n) {
          const auto id = cuts->cp(n, applied);
          return id && std::find(applied.begin(), applied.end(), *id) == applied.end() &&
                 std::find(found.begin(), found.end(), *id) == found.end();
        };
        if (const auto hit = emu.qtsearch(branch1, setup.depth, 4.0 * pow2(m), fresh, cut_delta)) {
          found.push_back(*cuts->cp(*hit, applied));
        }
      }
      rec.cuts_found = static_cast<int>(found.size());
      if (!found.empty()) {
        applied.insert(applied.end(), found.begin(), found.end());
        current = &cuts->apply(applied);
        prepared = std::make_unique<PreparedTree>(*current, params, setup.depth, ledger);
      }
    }
    rec.charge = ledger.charged_quantum - before;
    out.iterations.push_back(rec);
  }
}

}  // namespace

IqtsResult run_iqts(const TreeOracle& oracle, const MarkFn& f, const SolverParams& params,
                    QueryLedger& ledger) {
  const SolverSetup setup = solver_setup(oracle, params);
  QuantumEmulator emu(ledger, params.policy, params.mode);
  const double sub_delta = params.delta / (4.0 * setup.log_t);
  const PreparedTree prepared(oracle, params, setup.depth, ledger);
  IqtsResult out;
  for (int m = 0; m <= setup.m_cap; ++m) {
    const SubtreeCertificate cert =
        qsubtree_local(prepared.tree(), prepared.hcost, m, sub_delta, emu);
    const CertificateTree branch1(prepared.tree(), prepared.hcost, cert);
    out.final_m = m;
    out.marked = emu.qtsearch(branch1, setup.depth, 4.0 * pow2(m), f, sub_delta);
    if (out.marked) return out;
  }
  return out;
}

IqbbResult run_iqbb(const TreeOracle& oracle, const SolverParams& params, QueryLedger& ledger) {
  return run_doubling(oracle, nullptr, params, ledger);
}

IqbbResult run_iqbc(const TreeOracle& oracle, const CutConfig& cuts, const SolverParams& params,
                    QueryLedger& ledger) {
  if (cuts.p < 0) throw std::invalid_argument("run_iqbc: p must be nonnegative");
  if (cuts.p > 0 && !(cuts.cp && cuts.apply)) {
    throw std::invalid_argument("run_iqbc: cut search needs cp and apply");
  }
  return run_doubling(oracle, &cuts, params, ledger);
}

}  // namespace iqbb
