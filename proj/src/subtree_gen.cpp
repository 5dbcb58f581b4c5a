#include "iqbb/subtree_gen.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace iqbb {

CertificateTree::CertificateTree(const TreeOracle& base, const LocalHcost& hc,
                                 const SubtreeCertificate& cert)
    : base_(base), cert_(cert) {
  if (!cert.chain_only) split_view_.emplace(base, hc, cert.split, cert.c[0], cert.c[1]);
}

Children CertificateTree::branch(const NodeId& n) const {
  const int rel = n.depth() - base_.root().depth();
  if (cert_.chain_only) {
    if (static_cast<std::uint64_t>(rel) + 1 >= cert_.chain_nodes) return {};
    return base_.branch(n);
  }
  if (n.depth() < cert_.split.depth()) return base_.branch(n);
  return split_view_->branch(n);
}

namespace {

double pow2(int e) { return std::ldexp(1.0, e); }

SizeCounter trunc_counter(const TreeOracle& base, const LocalHcost& hc, const NodeId& subroot,
                          Hcost t, SubtreeIndex* index) {
  if (index) return [index, t](std::uint64_t cap) { return index->count_below(t, cap); };
  return [&base, &hc, subroot, t](std::uint64_t cap) {
    return count_nodes(TruncTree(base, hc, subroot, t), cap);
  };
}

}  // namespace

Hcost kthcost(QuantumEmulator& emu, const TreeOracle& base, const LocalHcost& hc,
              const NodeId& subroot, int d, double k, double eps, double delta,
              SubtreeIndex* index) {
  if (k < 0) return 0;
  // count > k for k < 1 means the subroot alone, which needs no estimate
  if (k < 1) return hc(subroot) + 1;
  const double step_delta = delta / std::max(1.0, std::log(static_cast<double>(hc.h_max())));
  Hcost lo = 0;              // |trunc| <= k known
  Hcost hi = hc.h_max() + 1;  // whole subtree
  while (hi - lo > 1) {
    const Hcost mid = lo + (hi - lo) / 2;
    const auto answer = emu.qtsize(trunc_counter(base, hc, subroot, mid, index), d, k, step_delta, eps);
    if (answer) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Hcost nextcost(QuantumEmulator& emu, const TreeOracle& base, const LocalHcost& hc,
               const NodeId& subroot, int d, double t_max, Hcost c, double delta) {
  const Hcost none = hc.h_max() + 1;
  const Hcost at_root = hc(subroot);
  if (at_root >= c) {
    emu.ledger().charge({Primitive::kMinLeaf, t_max, d, delta,
                         emu.policy().minleaf_charge(t_max, d, static_cast<double>(none), delta)});
    return at_root;
  }
  // nodes crossing c below a parent under c become leaves
  const PTruncTree cut(base, hc, subroot, c - 1);
  const CostFn aux = [&](const NodeId& n) -> Cost {
    if (!cut.branch(n).empty()) return 0;
    const Hcost h = hc(n);
    return h >= c ? h : none;
  };
  const NodeId leaf = emu.qtminleaf(cut, aux, d, static_cast<double>(none), t_max, delta);
  return aux(leaf);
}

namespace {

class Generator {
 public:
  Generator(const TreeOracle& base, const LocalHcost& hc, int m, double delta,
            QuantumEmulator& emu, SubtreeObserver* observer, const NodeId& split)
      : base_(base),
        hc_(hc),
        emu_(emu),
        observer_(observer),
        split_(split),
        d_(std::max(1, base.bounds().depth)),
        none_(hc.h_max() + 1) {
    st_.delta_prime = delta / (8.0 * (m + 3));
    const Children kids = base.branch(split);
    const bool swap = hc(kids[1]) < hc(kids[0]);
    side_ = swap ? std::array<NodeId, 2>{kids[1], kids[0]} : std::array<NodeId, 2>{kids[0], kids[1]};
    for (int i = 0; i < 2; ++i) index_[i] = std::make_unique<SubtreeIndex>(base, hc, side_[i]);
    bound_ = pow2(m + 1) * std::pow(1 + st_.eps2, 4) * std::pow(1 + st_.eps1, 2);
    m_ = m;
  }

  SubtreeCertificate run() {
    SubtreeCertificate cert;
    cert.m = m_;
    cert.split = split_;
    if (saturated()) {
      cert.c = {none_, none_};
      return cert;
    }
    auto& c = st_.c;
    auto& cn = st_.c_next;
    auto& t = st_.size_est;
    auto& lvl = st_.m_side;
    for (int i = 0; i < 2; ++i) {
      c[i] = hc_(side_[i]);
      cn[i] = max_child_hcost(side_[i]);
    }
    int guard = 0;
    while (t[0] + t[1] + 1 <= bound_) {
      if (++guard > 100000) throw std::logic_error("qsubtree_local: no progress");
      const int cur = st_.current;
      const int nc = 1 - cur;
      auto room = [&](double other) { return bound_ - other - 1; };

      while (exceeds(cur, c[nc], pow2(lvl[cur]))) {
        if (pow2(lvl[cur] + 1) <= room(t[nc])) {
          ++lvl[cur];
        } else {
          st_.done = true;
          break;
        }
      }
      while (c[nc] < cn[nc] && !st_.done && exceeds(cur, cn[nc], pow2(lvl[cur]))) {
        if (pow2(lvl[cur] + 1) > room(t[nc])) {
          st_.done = true;
          break;
        }
        const Hcost cand = kth(cur, pow2(lvl[cur]));
        if (cand >= cn[nc]) {
          ++lvl[cur];
          c[cur] = cand;
          break;
        }
        // grow the other side only if the room survives its new size
        const Hcost other = next(nc, cand, lvl[cur]);
        const double other_size = size_est(nc, other, pow2(lvl[cur]));
        if (pow2(lvl[cur] + 1) > room(other_size)) {
          st_.done = true;
          break;
        }
        ++lvl[cur];
        c[cur] = cand;
        c[nc] = other;
        t[nc] = other_size;
      }
      Hcost commit = 0;
      if (!st_.done) {
        // the committed threshold must still fit the remaining room
        commit = next(cur, cn[nc], lvl[cur]);
        if (exceeds(cur, commit, room(t[nc]))) st_.done = true;
      }
      if (st_.done) {
        c[cur] = kth(cur, room(t[nc]));
        break;
      }
      c[cur] = commit;
      // the next target never falls below the committed threshold
      cn[cur] = std::max(c[cur], kth(cur, pow2(lvl[cur])));
      for (int i = 0; i < 2; ++i) t[i] = size_est(i, c[i], pow2(lvl[i] - 1));
      st_.current = nc;
      max_level_ = std::max({max_level_, lvl[0], lvl[1]});
      if (observer_) observer_->on_boundary(split_, st_);
    }
    max_level_ = std::max({max_level_, lvl[0], lvl[1]});
    cert.c = c;
    cert.max_side_level = max_level_;
    return cert;
  }

  const SubtreeGenState& state() const { return st_; }

 private:
  bool saturated() {
    SubtreeIndex whole(base_, hc_, split_);
    const double t0 = 4.0 * pow2(m_) / std::pow(1 + st_.eps2, 2);
    const SizeCounter count = [&whole, this](std::uint64_t cap) {
      return whole.count_below(none_, cap);
    };
    return emu_.qtsize(count, d_, t0, st_.delta_prime, st_.eps2).has_value();
  }

  Hcost max_child_hcost(const NodeId& n) const {
    const Children kids = base_.branch(n);
    if (kids.empty()) return none_;
    Hcost best = 0;
    for (const NodeId& k : kids) best = std::max(best, hc_(k));
    return best;
  }

  // Whether |trunc(side, c)| > t0 per qtsize; t0 < 1 is decided by the side root.
  bool exceeds(int side, Hcost c, double t0) {
    if (t0 < 0) return true;
    if (t0 < 1) return hc_(side_[side]) < c;
    return !emu_.qtsize(trunc_counter(base_, hc_, side_[side], c, index_[side].get()), d_, t0,
                        st_.delta_prime, st_.eps2);
  }

  // Estimate of |trunc(side, c)|, doubling T0 until an estimate comes back.
  double size_est(int side, Hcost c, double t0) {
    t0 = std::max(t0, 1.0);
    const SizeCounter count = trunc_counter(base_, hc_, side_[side], c, index_[side].get());
    for (;;) {
      if (auto est = emu_.qtsize(count, d_, t0, st_.delta_prime, st_.eps2)) return *est;
      t0 *= 2;
    }
  }

  Hcost kth(int side, double k) {
    const Hcost r = kthcost(emu_, base_, hc_, side_[side], d_, k, st_.eps1, st_.delta_prime,
                            index_[side].get());
    if (observer_) observer_->on_kthcost(side_[side], k, st_.eps1, r);
    return r;
  }

  Hcost next(int side, Hcost c, int level) {
    const Hcost r = nextcost(emu_, base_, hc_, side_[side], d_, 4.0 * pow2(level), c,
                             st_.delta_prime);
    if (observer_) observer_->on_nextcost(side_[side], c, r);
    return r;
  }

  const TreeOracle& base_;
  const LocalHcost& hc_;
  QuantumEmulator& emu_;
  SubtreeObserver* observer_;
  NodeId split_;
  int d_;
  Hcost none_;
  int m_ = 0;
  double bound_ = 0;
  int max_level_ = 0;
  std::array<NodeId, 2> side_;
  std::array<std::unique_ptr<SubtreeIndex>, 2> index_;
  SubtreeGenState st_;
};

}  // namespace

SubtreeCertificate qsubtree_local(const TreeOracle& oracle, const LocalHcost& hc, int m,
                                  double delta, QuantumEmulator& emu, SubtreeObserver* observer) {
  if (m < 0) throw std::invalid_argument("qsubtree_local: m must be nonnegative");
  // descend the unary chain above the first node with two children
  NodeId split = oracle.root();
  std::uint64_t chain = 1;
  for (Children kids = oracle.branch(split); kids.size() == 1; kids = oracle.branch(split)) {
    split = kids[0];
    ++chain;
  }
  const bool leaf_end = oracle.branch(split).empty();
  const double first = pow2(m);
  if (leaf_end || first <= static_cast<double>(chain)) {
    SubtreeCertificate cert;
    cert.m = m;
    cert.split = split;
    cert.chain_only = true;
    cert.chain_nodes = static_cast<std::uint64_t>(std::min(first, static_cast<double>(chain)));
    return cert;
  }
  Generator gen(oracle, hc, m, delta, emu, observer, split);
  return gen.run();
}

DerivedSubtree qsubtree(const BranchLocalHeuristic& h, const TreeOracle& oracle, int m,
                        double delta, QuantumEmulator& emu) {
  DerivedSubtree out;
  LocalReduction red = reduce_to_local(h, oracle);
  out.lifted = std::move(red.tree);
  out.hcost = std::make_unique<LocalHcost>(total_order(red.hcost, oracle.bounds().depth));
  out.certificate = qsubtree_local(*out.lifted, *out.hcost, m, delta, emu);
  out.tree = std::make_unique<CertificateTree>(*out.lifted, *out.hcost, out.certificate);
  return out;
}

CertificateReport verify_certificate(const TreeOracle& cert_tree, const ExplorationTrace& full_pops,
                                     int m) {
  std::unordered_set<NodeId> members;
  for_each_node(cert_tree, [&](const NodeId& n, const Children&) { members.insert(n); });
  CertificateReport rep;
  rep.node_count = members.size();
  const auto k = static_cast<std::uint64_t>(std::min<double>(pow2(m), full_pops.q()));
  std::uint64_t first_missing = full_pops.q();
  for (std::uint64_t i = 0; i < full_pops.q(); ++i) {
    if (!members.count(full_pops.pop(i))) {
      first_missing = i;
      break;
    }
  }
  rep.contains_first = first_missing >= k;
  rep.valid_fraction = members.empty() ? 1.0
                                       : static_cast<double>(first_missing) /
                                             static_cast<double>(members.size());
  return rep;
}

}  // namespace iqbb
