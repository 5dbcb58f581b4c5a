#include "iqbb/heuristics.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iqbb {

HeuristicKind parse_heuristic(std::string_view name) {
  if (name == "cost") return HeuristicKind::kCostBased;
  if (name == "dfs") return HeuristicKind::kDepthFirst;
  if (name == "astar") return HeuristicKind::kAStar;
  throw std::invalid_argument("unknown heuristic '" + std::string(name) + "'");
}

std::string_view heuristic_name(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::kCostBased:
      return "cost";
    case HeuristicKind::kDepthFirst:
      return "dfs";
    case HeuristicKind::kAStar:
      return "astar";
    case HeuristicKind::kCustom:
      return "custom";
  }
  return "custom";
}

BranchLocalHeuristic cost_based(const TreeBounds& bounds) {
  BranchLocalHeuristic h;
  h.kind = HeuristicKind::kCostBased;
  h.hlocal = [](const TreeOracle& o, const NodeId& n) { return static_cast<double>(o.cost(n)); };
  h.hparent = [](const TreeOracle&, const NodeId&, int) { return 0.0; };
  h.combine = [](double local, std::span<const double>, int) { return local; };
  h.h_max_real = static_cast<double>(bounds.c_max);
  h.uses_transcript = false;
  return h;
}

BranchLocalHeuristic a_star(const TreeBounds& bounds, double weight) {
  BranchLocalHeuristic h;
  h.kind = HeuristicKind::kAStar;
  h.hlocal = [](const TreeOracle& o, const NodeId& n) { return static_cast<double>(o.cost(n)); };
  h.hparent = [](const TreeOracle&, const NodeId&, int) { return 0.0; };
  h.combine = [weight](double local, std::span<const double>, int depth) {
    return local + weight * depth;
  };
  h.h_max_real = static_cast<double>(bounds.c_max) + weight * bounds.depth;
  h.uses_transcript = false;
  return h;
}

BranchLocalHeuristic depth_first(const TreeBounds& bounds) {
  const int span = bounds.depth;
  if (span > 33) throw std::overflow_error("depth_first: depth bound above 33 not representable");
  BranchLocalHeuristic h;
  h.kind = HeuristicKind::kDepthFirst;
  h.hlocal = [](const TreeOracle&, const NodeId&) { return 0.0; };
  // 0 for the preferred (cheaper, then lower index) child, 1 for the other
  h.hparent = [](const TreeOracle& o, const NodeId& parent, int position) {
    const Children kids = o.branch(parent);
    if (kids.size() < 2) return 0.0;
    const Cost c0 = o.cost(kids[0]);
    const Cost c1 = o.cost(kids[1]);
    const int preferred = c1 < c0 ? 1 : 0;
    return position == preferred ? 0.0 : 1.0;
  };
  // base-3 digits in {1,2} per step: ancestors precede descendants and the
  // preferred subtree precedes its sibling
  h.combine = [span](double, std::span<const double> transcript, int) {
    double key = 1.0;
    double place = std::pow(3.0, span - 1);
    for (double t : transcript) {
      key += (t + 1.0) * place;
      place /= 3.0;
    }
    return key;
  };
  h.h_max_real = std::pow(3.0, span) + 1.0;
  return h;
}

BranchLocalHeuristic make_heuristic(HeuristicKind kind, const TreeBounds& bounds) {
  switch (kind) {
    case HeuristicKind::kCostBased:
      return cost_based(bounds);
    case HeuristicKind::kAStar:
      return a_star(bounds);
    case HeuristicKind::kDepthFirst:
      return depth_first(bounds);
    case HeuristicKind::kCustom:
      break;
  }
  throw std::invalid_argument("make_heuristic: custom heuristics have no factory");
}

LiftedTree::LiftedTree(const TreeOracle& base, BranchLocalHeuristic h)
    : base_(base), h_(std::move(h)) {
  if (h_.uses_transcript) transcripts_.emplace(base_.root(), std::vector<double>{});
}

const std::vector<double>& LiftedTree::transcript(const NodeId& n) const {
  {
    std::lock_guard lock(mu_);
    auto it = transcripts_.find(n);
    if (it != transcripts_.end()) return it->second;
  }
  // not yet seen: rebuild along the path from the deepest cached ancestor
  const int top = base_.root().depth();
  int d = n.depth();
  std::vector<double> path_entries;
  const std::vector<double>* anchor = nullptr;
  {
    std::lock_guard lock(mu_);
    for (; d >= top; --d) {
      auto it = transcripts_.find(n.prefix(d));
      if (it != transcripts_.end()) {
        anchor = &it->second;
        break;
      }
    }
  }
  if (!anchor) throw std::out_of_range("LiftedTree: node outside tree " + n.to_string());
  std::vector<double> t = *anchor;
  for (int k = d; k < n.depth(); ++k) {
    const NodeId parent = n.prefix(k);
    const NodeId next = n.prefix(k + 1);
    const Children kids = base_.branch(parent);
    int position = -1;
    for (int i = 0; i < kids.size(); ++i) {
      if (kids[i] == next) position = i;
    }
    if (position < 0) throw std::out_of_range("LiftedTree: node outside tree " + n.to_string());
    t.push_back(h_.hparent(base_, parent, position));
    std::lock_guard lock(mu_);
    transcripts_.try_emplace(next, t);
  }
  std::lock_guard lock(mu_);
  return transcripts_.at(n);
}

Children LiftedTree::branch(const NodeId& n) const {
  const Children kids = base_.branch(n);
  if (h_.uses_transcript && !kids.empty()) {
    const std::vector<double>& parent_t = transcript(n);
    for (int i = 0; i < kids.size(); ++i) {
      {
        std::lock_guard lock(mu_);
        if (transcripts_.count(kids[i])) continue;
      }
      std::vector<double> t = parent_t;
      t.push_back(h_.hparent(base_, n, i));
      std::lock_guard lock(mu_);
      transcripts_.try_emplace(kids[i], std::move(t));
    }
  }
  return kids;
}

LiftedNode LiftedTree::lift(const NodeId& n) const {
  LiftedNode out{n, n.depth() - base_.root().depth(), {}};
  if (h_.uses_transcript) {
    out.transcript = transcript(n);
  } else {
    out.transcript.assign(out.depth, 0.0);
  }
  return out;
}

double LiftedTree::value(const NodeId& n) const {
  const double local = h_.hlocal(base_, n);
  const int depth = n.depth() - base_.root().depth();
  if (!h_.uses_transcript) return h_.combine(local, {}, depth);
  return h_.combine(local, transcript(n), depth);
}

Hcost quantize(double v, double p) {
  if (!(p > 0)) throw std::invalid_argument("quantize: precision must be positive");
  if (v < 0) throw std::invalid_argument("quantize: values must be nonnegative");
  const double scaled = v / p;
  // absorbs representation error such as 0.494 / 1e-4 = 4939.999...
  const double snapped = std::floor(scaled + 1e-9 * std::max(1.0, scaled));
  return static_cast<Hcost>(snapped) + 1;
}

std::vector<Hcost> quantize(std::span<const double> values, double p) {
  std::vector<Hcost> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(quantize(v, p));
  return out;
}

Hcost quantized_bound(double h_max_real, double p) {
  if (!(p > 0)) throw std::invalid_argument("quantize: precision must be positive");
  return static_cast<Hcost>(std::ceil(h_max_real / p)) + 1;
}

LocalReduction reduce_to_local(const BranchLocalHeuristic& h, const TreeOracle& oracle) {
  LocalReduction out;
  out.tree = std::make_unique<LiftedTree>(oracle, h);
  const LiftedTree* lifted = out.tree.get();
  const double p = h.precision;
  const bool distinct = h.kind == HeuristicKind::kDepthFirst;
  out.hcost = LocalHcost([lifted, p](const NodeId& n) { return quantize(lifted->value(n), p); },
                         quantized_bound(h.h_max_real, p), distinct);
  return out;
}

LocalHcost total_order(const LocalHcost& hc, int depth_bound) {
  if (hc.distinct()) return hc;
  const int w = depth_bound + 1;
  if (w >= 63) throw std::overflow_error("total_order: depth bound too large for key width");
  const Hcost h_max = hc.h_max();
  if (std::bit_width(h_max) + w > 63) {
    throw std::overflow_error("total_order: h_max too large for composed 64-bit key");
  }
  const Hcost composed_max = ((h_max + 1) << w) - 1;
  return LocalHcost([hc, w](const NodeId& n) { return (hc(n) << w) + n.shortlex_rank(); },
                    composed_max, true);
}

}  // namespace iqbb
