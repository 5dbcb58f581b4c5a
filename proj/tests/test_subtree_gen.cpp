#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "iqbb/subtree_gen.hpp"
#include "support/shadow.hpp"
#include "support/trees.hpp"

using namespace iqbb;
using iqbb::testing::ShadowChecker;
using iqbb::testing::ToyTree;

namespace {

struct RunOutcome {
  bool contains = true;
  bool within_size = true;
  bool level_cap = true;
  std::uint64_t mismatches = 0;
  std::uint64_t invariant_breaks = 0;
};

// Runs qsubtree_local for every m with 2^m <= 2T under one estimator mode.
RunOutcome check_tree(const ExplicitTree& base, EstimatorMode mode) {
  RunOutcome out;
  const LocalHcost hc = total_order(base.stored_hcost(), base.bounds().depth);
  const ExplorationTrace full = full_trace(base, hc);
  const auto T = static_cast<double>(base.size());
  for (int m = 0; std::ldexp(1.0, m) <= 2 * T; ++m) {
    QueryLedger ledger;
    QuantumEmulator emu(ledger, {}, EstimatorMode{mode.kind, mode.seed + static_cast<std::uint64_t>(m)});
    ShadowChecker shadow(base, hc, mode, &full);
    const SubtreeCertificate cert = qsubtree_local(base, hc, m, 0.1, emu, &shadow);
    const CertificateTree view(base, hc, cert);
    const CertificateReport rep = verify_certificate(view, full, m);
    const double chain = cert.split.depth() - base.root().depth();
    out.contains &= rep.contains_first;
    out.within_size &= static_cast<double>(rep.node_count) <= cert.node_bound() + chain;
    out.level_cap &= shadow.max_level <= m + 3;
    out.mismatches += shadow.mismatches;
    out.invariant_breaks += shadow.invariant_breaks;
  }
  return out;
}

}  // namespace

TEST_SUITE("subtree_gen") {
  TEST_CASE("kthcost on toy subtrees") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    CHECK(kthcost(emu, toy.tree, hc, toy["a"], 2, 2, kSubtreeEps, 0.1) == 8);
    CHECK(kthcost(emu, toy.tree, hc, toy["b"], 2, 1, kSubtreeEps, 0.1) == 7);
    CHECK(kthcost(emu, toy.tree, hc, toy["b"], 2, 0, kSubtreeEps, 0.1) == 6);
    CHECK(kthcost(emu, toy.tree, hc, toy["b"], 2, 3, kSubtreeEps, 0.1) == hc.h_max() + 1);
    CHECK(kthcost(emu, toy.tree, hc, toy["b"], 2, -1, kSubtreeEps, 0.1) == 0);
  }

  TEST_CASE("nextcost on toy subtrees") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    CHECK(nextcost(emu, toy.tree, hc, toy["b"], 2, 4, 6, 0.1) == 6);
    CHECK(nextcost(emu, toy.tree, hc, toy["b"], 2, 4, 7, 0.1) == 8);
    CHECK(nextcost(emu, toy.tree, hc, toy["b"], 2, 4, 1, 0.1) == 5);
    CHECK(nextcost(emu, toy.tree, hc, toy["b"], 2, 4, 9, 0.1) == hc.h_max() + 1);
    CHECK(ledger.charge_breakdown.size() == 4);
    for (const ChargeEntry& e : ledger.charge_breakdown) CHECK(e.primitive == Primitive::kMinLeaf);
  }

  TEST_CASE("toy certificates for m = 0..3") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    const ExplorationTrace full = full_trace(toy.tree, hc);
    for (int m = 0; m <= 3; ++m) {
      QueryLedger ledger;
      QuantumEmulator emu(ledger);
      ShadowChecker shadow(toy.tree, hc, EstimatorMode::exact(), &full);
      const SubtreeCertificate cert = qsubtree_local(toy.tree, hc, m, 0.1, emu, &shadow);
      const CertificateTree view(toy.tree, hc, cert);
      const CertificateReport rep = verify_certificate(view, full, m);
      CAPTURE(m);
      CHECK(rep.contains_first);
      CHECK(static_cast<double>(rep.node_count) <= cert.node_bound());
      CHECK(shadow.mismatches == 0);
      if (m == 3) {
        CHECK(rep.node_count == 7);
        CHECK(rep.valid_fraction == 1.0);
      }
    }
  }

  TEST_CASE("a corrupted threshold loses the first nodes") {
    ToyTree toy;
    const LocalHcost hc = toy.tree.stored_hcost();
    const ExplorationTrace full = full_trace(toy.tree, hc);
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    SubtreeCertificate cert = qsubtree_local(toy.tree, hc, 1, 0.1, emu);
    cert.chain_only = false;
    cert.split = toy["r"];
    cert.c = {0, cert.c[1]};
    const CertificateTree view(toy.tree, hc, cert);
    CHECK_FALSE(verify_certificate(view, full, 1).contains_first);
  }

  TEST_CASE("cost-based heuristic on the toy tree with m = 2") {
    ToyTree toy;
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const DerivedSubtree sub = qsubtree(cost_based(toy.tree.bounds()), toy.tree, 2, 0.1, emu);
    std::unordered_set<NodeId> members;
    for (const NodeId& n : collect_nodes(*sub.tree)) members.insert(n);
    CHECK(members.size() <= 16);
    for (const char* name : {"r", "a", "c", "b"}) {
      CHECK(members.count(toy[name]) == 1);
    }
  }

  TEST_CASE("depth-first heuristic on a five-node path with m = 2") {
    const ExplicitTree path = iqbb::testing::path_tree(5);
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const DerivedSubtree sub = qsubtree(depth_first(path.bounds()), path, 2, 0.1, emu);
    const auto nodes = collect_nodes(*sub.tree);
    CHECK(nodes.size() >= 4);
    NodeId n = path.root();
    for (int i = 0; i < 4; ++i) {
      CHECK(std::find(nodes.begin(), nodes.end(), n) != nodes.end());
      n = n.child(0);
    }
  }

  TEST_CASE("whole-tree chain gives the first chain nodes") {
    const ExplicitTree path = iqbb::testing::path_tree(5);
    const LocalHcost hc = path.stored_hcost();
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const SubtreeCertificate cert = qsubtree_local(path, hc, 1, 0.1, emu);
    CHECK(cert.chain_only);
    CHECK(collect_nodes(CertificateTree(path, hc, cert)).size() == 2);
  }

  TEST_CASE("random corpus containment and size in both estimator modes") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const ExplicitTree base = iqbb::testing::random_corpus_tree(seed);
      for (const EstimatorMode mode : {EstimatorMode::exact(), EstimatorMode::adversarial(seed)}) {
        CAPTURE(seed);
        CAPTURE(mode.to_string());
        const RunOutcome r = check_tree(base, mode);
        CHECK(r.contains);
        CHECK(r.within_size);
        CHECK(r.level_cap);
        CHECK(r.mismatches == 0);
        CHECK(r.invariant_breaks == 0);
      }
    }
  }
}
