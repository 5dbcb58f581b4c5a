#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "iqbb/incremental_solvers.hpp"
#include "support/trees.hpp"

using namespace iqbb;
using iqbb::testing::ToyTree;

namespace {

Cost min_leaf_cost(const ExplicitTree& t) {
  Cost best = ~Cost{0};
  for (const ExplicitNode& n : t.nodes()) {
    if (n.child_count == 0) best = std::min(best, n.cost);
  }
  return best;
}

}  // namespace

TEST_SUITE("incremental_solvers") {
  TEST_CASE("iqbb on the toy tree returns the cheapest leaf") {
    ToyTree toy;
    QueryLedger ledger;
    const IqbbResult r = run_iqbb(toy.tree, {}, ledger);
    CHECK(r.leaf == toy["c"]);
    CHECK(r.cost == 4);
    CHECK_FALSE(r.capped);
    CHECK(ledger.charged_quantum > 0);
  }

  TEST_CASE("derived oracles on a hand-built toy certificate") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    SubtreeCertificate cert;
    cert.m = 2;
    cert.split = toy["r"];
    cert.c = {4, 7};  // {r, a, c, b, f}
    const CertificateTree branch1(toy.tree, hc, cert);
    REQUIRE(collect_nodes(branch1).size() == 5);
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const SolverSetup setup = solver_setup(toy.tree, {});
    NodeId leaf;
    const IterationRecord rec = evaluate_certificate(emu, toy.tree, branch1, setup, 16, 0.1, &leaf);
    REQUIRE(rec.incumbent);
    CHECK(*rec.incumbent == 4);
    CHECK(leaf == toy["c"]);
    CHECK(rec.bound1 == 4);
    CHECK(rec.bound2 == 2);
    CHECK(rec.best_bound == 2);
    CHECK(ledger.charge_breakdown.size() == 3);
  }

  TEST_CASE("an all-internal certificate leaves the incumbent undefined") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    SubtreeCertificate cert;
    cert.split = toy["r"];
    cert.c = {3, 6};  // {r, a, b}
    const CertificateTree branch1(toy.tree, hc, cert);
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const IterationRecord rec =
        evaluate_certificate(emu, toy.tree, branch1, solver_setup(toy.tree, {}), 8, 0.1, nullptr);
    CHECK_FALSE(rec.incumbent);
    CHECK(rec.best_bound == 2);
  }

  TEST_CASE("single-leaf tree resolves at m = 0") {
    const ExplicitTree t(5, 5);
    QueryLedger ledger;
    const IqbbResult r = run_iqbb(t, {}, ledger);
    CHECK(r.leaf == NodeId{});
    CHECK(r.final_m == 0);
  }

  TEST_CASE("iqts finds marked nodes") {
    ToyTree toy;
    QueryLedger ledger;
    const IqtsResult g = run_iqts(toy.tree, [&](const NodeId& n) { return n == toy["g"]; }, {}, ledger);
    REQUIRE(g.marked);
    CHECK(*g.marked == toy["g"]);
    CHECK(g.final_m <= 3);

    const IqtsResult r = run_iqts(toy.tree, [](const NodeId&) { return true; }, {}, ledger);
    CHECK(*r.marked == NodeId{});
    CHECK(r.final_m == 0);

    const IqtsResult none = run_iqts(toy.tree, [](const NodeId&) { return false; }, {}, ledger);
    CHECK_FALSE(none.marked);

    const ExplicitTree path = iqbb::testing::path_tree(6);
    NodeId end = path.root();
    for (int i = 0; i < 5; ++i) end = end.child(0);
    SolverParams dfs;
    dfs.heuristic = HeuristicKind::kDepthFirst;
    const IqtsResult p = run_iqts(path, [&](const NodeId& n) { return n == end; }, dfs, ledger);
    CHECK(*p.marked == end);
  }

  TEST_CASE("iqbb is exact and brackets the optimum on random trees") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const ExplicitTree t = iqbb::testing::random_corpus_tree(500 + seed);
      const Cost opt = min_leaf_cost(t);
      for (const HeuristicKind kind :
           {HeuristicKind::kCostBased, HeuristicKind::kDepthFirst, HeuristicKind::kAStar}) {
        for (const EstimatorMode mode : {EstimatorMode::exact(), EstimatorMode::adversarial(seed)}) {
          SolverParams params;
          params.heuristic = kind;
          params.mode = mode;
          QueryLedger ledger;
          const IqbbResult r = run_iqbb(t, params, ledger);
          CAPTURE(seed);
          CAPTURE(heuristic_name(kind));
          CHECK(r.cost == opt);
          CHECK(t.cost(r.leaf) == opt);
          CHECK(t.branch(r.leaf).empty());
          CHECK_FALSE(r.capped);
          double total = 0;
          for (const IterationRecord& it : r.iterations) {
            CHECK(it.best_bound <= opt);
            if (it.incumbent) CHECK(*it.incumbent >= opt);
            total += it.charge;
          }
          CHECK(total == doctest::Approx(ledger.charged_quantum));
        }
      }
    }
  }

  TEST_CASE("a positive eps returns an eps-optimal leaf") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const ExplicitTree t = iqbb::testing::random_corpus_tree(900 + seed);
      SolverParams params;
      params.eps = 3;
      QueryLedger ledger;
      const IqbbResult r = run_iqbb(t, params, ledger);
      CHECK(r.cost <= min_leaf_cost(t) + 3);
    }
  }

  TEST_CASE("iqbc without cuts reproduces iqbb exactly") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const ExplicitTree t = iqbb::testing::random_corpus_tree(700 + seed);
      SolverParams params;
      params.mode = EstimatorMode::adversarial(seed);
      QueryLedger a;
      QueryLedger b;
      const IqbbResult x = run_iqbb(t, params, a);
      const IqbbResult y = run_iqbc(t, CutConfig{}, params, b);
      CHECK(x.leaf == y.leaf);
      CHECK(x.iterations.size() == y.iterations.size());
      CHECK(a.charged_quantum == b.charged_quantum);
      CHECK(a.branch_calls == b.branch_calls);
      CHECK(a.charge_breakdown.size() == b.charge_breakdown.size());
    }
  }
}
