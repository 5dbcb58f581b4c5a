#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>

#include "iqbb/classical_search.hpp"
#include "iqbb/heuristics.hpp"
#include "iqbb/quantum_primitives.hpp"
#include "iqbb/subtree_index.hpp"
#include "iqbb/truncation.hpp"

namespace iqbb {

inline const double kSubtreeEps = std::log(2.0) / 8.0;

struct SubtreeGenState {
  int current = 0;
  std::array<int, 2> m_side{0, 0};
  std::array<double, 2> size_est{1.0, 1.0};
  std::array<Hcost, 2> c{0, 0};
  std::array<Hcost, 2> c_next{0, 0};
  bool done = false;
  double eps1 = kSubtreeEps;
  double eps2 = kSubtreeEps;
  double delta_prime = 0.0;
};

// Hooks for shadow checking; defaults do nothing.
class SubtreeObserver {
 public:
  virtual ~SubtreeObserver() = default;
  virtual void on_kthcost(const NodeId& /*subroot*/, double /*k*/, double /*eps*/,
                          Hcost /*result*/) {}
  virtual void on_nextcost(const NodeId& /*subroot*/, Hcost /*c*/, Hcost /*result*/) {}
  // After each outer-loop iteration, with current already flipped.
  virtual void on_boundary(const NodeId& /*split*/, const SubtreeGenState& /*state*/) {}
};

// Output of subtree generation: {root..split chain} plus twotrunc(split, c0, c1),
// or, for chain_only, the first chain_nodes nodes of a unary chain.
struct SubtreeCertificate {
  int m = 0;
  NodeId split;
  std::array<Hcost, 2> c{0, 0};
  bool chain_only = false;
  std::uint64_t chain_nodes = 0;
  int max_side_level = 0;  // max over the run of m0, m1

  double node_bound() const { return 4.0 * std::ldexp(1.0, m); }
};

// Tree described by a certificate over the base oracle.
class CertificateTree final : public TreeOracle {
 public:
  CertificateTree(const TreeOracle& base, const LocalHcost& hc, const SubtreeCertificate& cert);

  NodeId root() const override { return base_.root(); }
  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override { return base_.cost(n); }
  TreeBounds bounds() const override { return base_.bounds(); }

  const SubtreeCertificate& certificate() const { return cert_; }

 private:
  const TreeOracle& base_;
  SubtreeCertificate cert_;
  std::optional<TwoTruncTree> split_view_;
};

// Minimal threshold c with |trunc(subroot, c)| > k, by binary search over
// [0, h_max + 1] with qtsize. h_max + 1 means the subtree holds too few nodes.
// `index` accelerates counting and must be built on (base, hc, subroot).
Hcost kthcost(QuantumEmulator& emu, const TreeOracle& base, const LocalHcost& hc,
              const NodeId& subroot, int d, double k, double eps, double delta,
              SubtreeIndex* index = nullptr);

// min{hc(N) >= c : N below subroot} via ptrunc, an auxiliary leaf cost and
// qtminleaf. h_max + 1 means no such node.
Hcost nextcost(QuantumEmulator& emu, const TreeOracle& base, const LocalHcost& hc,
               const NodeId& subroot, int d, double t_max, Hcost c, double delta);

// Certificate containing the first 2^m nodes popped under hc and at most
// 4 * 2^m nodes (plus the unary chain above the first branching node).
SubtreeCertificate qsubtree_local(const TreeOracle& oracle, const LocalHcost& hc, int m,
                                  double delta, QuantumEmulator& emu,
                                  SubtreeObserver* observer = nullptr);

struct DerivedSubtree {
  std::unique_ptr<LiftedTree> lifted;
  std::unique_ptr<LocalHcost> hcost;
  SubtreeCertificate certificate;
  std::unique_ptr<CertificateTree> tree;
};

// Heuristic reduction, tie-break and subtree generation composed.
DerivedSubtree qsubtree(const BranchLocalHeuristic& h, const TreeOracle& oracle, int m,
                        double delta, QuantumEmulator& emu);

struct CertificateReport {
  bool contains_first = false;
  std::uint64_t node_count = 0;
  double valid_fraction = 0.0;
};

// full_pops must be the complete pop order of the whole tree under the same hc.
CertificateReport verify_certificate(const TreeOracle& cert_tree, const ExplorationTrace& full_pops,
                                     int m);

}  // namespace iqbb
