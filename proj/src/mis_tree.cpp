#include <algorithm>
#include <bit>
#include <cmath>

#include "iqbb/errors.hpp"
#include "iqbb/heuristics.hpp"
#include "iqbb/problems.hpp"

namespace iqbb {

namespace {

constexpr double kIntegralTol = 1e-7;

}  // namespace

MisTree::MisTree(MisInstance inst, std::vector<int> cuts) : inst_(std::move(inst)), cuts_(std::move(cuts)) {
  if (inst_.n < 1 || inst_.n > 250) throw InstanceError("mis tree supports 1..250 vertices");
  std::vector<std::vector<bool>> adj(inst_.n, std::vector<bool>(inst_.n, false));
  for (const auto& [a, b] : inst_.edges) adj[a][b] = adj[b][a] = true;
  for (int a = 0; a < inst_.n; ++a) {
    for (int b = a + 1; b < inst_.n; ++b) {
      if (!adj[a][b]) continue;
      for (int c = b + 1; c < inst_.n; ++c) {
        if (adj[a][c] && adj[b][c]) triangles_.push_back({a, b, c});
      }
    }
  }
  for (int id : cuts_) {
    if (id < 0 || id >= static_cast<int>(triangles_.size())) throw InstanceError("mis cut id out of range");
  }
}

std::shared_ptr<const MisTree::State> MisTree::compute(const NodeId& n, const State* parent) const {
  auto s = std::make_shared<State>();
  const int nv = inst_.n;
  if (parent) {
    s->fixed = parent->fixed;
    s->fixed[parent->branch_var] = static_cast<std::int8_t>(n.bit(n.depth() - 1));
  } else {
    s->fixed.assign(nv, -1);
  }
  LpProblem lp;
  lp.c.assign(nv, -1.0);
  lp.lower.assign(nv, 0.0);
  lp.upper.assign(nv, 1.0);
  for (int v = 0; v < nv; ++v) {
    if (s->fixed[v] >= 0) lp.lower[v] = lp.upper[v] = s->fixed[v];
  }
  for (const auto& [a, b] : inst_.edges) {
    LpRow r;
    r.a.assign(nv, 0.0);
    r.a[a] = r.a[b] = 1.0;
    r.b = 1.0;
    lp.rows.push_back(std::move(r));
  }
  for (int id : cuts_) {
    LpRow r;
    r.a.assign(nv, 0.0);
    for (int v : triangles_[id]) r.a[v] = 1.0;
    r.b = 1.0;
    lp.rows.push_back(std::move(r));
  }
  const LpResult res = simplex_lp(lp);
  if (res.status == LpStatus::kUnbounded) throw InstanceError("mis relaxation unbounded");
  const Cost floor_cost = parent ? parent->cost : 1;
  if (res.status == LpStatus::kInfeasible) {
    s->cost = bounds().c_max;
    return s;
  }
  s->x = res.x;
  s->lp_value = -res.value;
  s->cost = std::max(floor_cost, quantize(std::max(0.0, nv - s->lp_value), kCostResolution));
  double best = kIntegralTol;
  for (int v = 0; v < nv; ++v) {
    const double frac = std::min(s->x[v], 1.0 - s->x[v]);
    if (frac > best + 1e-12) {
      best = frac;
      s->branch_var = v;
    }
  }
  return s;
}

std::shared_ptr<const MisTree::State> MisTree::state(const NodeId& n) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(n); it != cache_.end()) return it->second;
  }
  std::shared_ptr<const State> parent;
  if (!n.is_root()) {
    parent = state(n.parent());
    if (parent->branch_var < 0) throw std::invalid_argument("mis tree: node below a leaf");
  }
  auto s = compute(n, parent.get());
  std::lock_guard lock(mu_);
  return cache_.emplace(n, std::move(s)).first->second;
}

Children MisTree::branch(const NodeId& n) const {
  if (state(n)->branch_var < 0) return {};
  return {n.child(0), n.child(1)};
}

Cost MisTree::cost(const NodeId& n) const { return state(n)->cost; }

TreeBounds MisTree::bounds() const {
  TreeBounds b;
  b.depth = inst_.n;
  b.size = inst_.n >= 62 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << (inst_.n + 1)) - 1;
  b.c_max = quantize(inst_.n, kCostResolution) + 1;
  return b;
}

std::optional<double> MisTree::leaf_value(const NodeId& leaf) const {
  const auto s = state(leaf);
  if (s->x.empty() || s->branch_var >= 0) return std::nullopt;
  return std::round(s->lp_value);
}

std::optional<int> MisTree::violated_triangle(const NodeId& n, const std::vector<int>& skip) const {
  const auto s = state(n);
  if (s->x.empty()) return std::nullopt;
  for (int id = 0; id < static_cast<int>(triangles_.size()); ++id) {
    if (std::find(skip.begin(), skip.end(), id) != skip.end()) continue;
    const auto& t = triangles_[id];
    if (s->x[t[0]] + s->x[t[1]] + s->x[t[2]] > 1.0 + kIntegralTol) return id;
  }
  return std::nullopt;
}

const MisTree& MisCutFamily::tree(const std::vector<int>& applied) {
  std::vector<int> key = applied;
  std::sort(key.begin(), key.end());
  auto& slot = trees_[key];
  if (!slot) slot = std::make_unique<MisTree>(inst_, key);
  return *slot;
}

CutConfig MisCutFamily::config() {
  CutConfig cfg;
  cfg.p = p_;
  cfg.cp = [this](const NodeId& n, const std::vector<int>& applied) {
    return tree(applied).violated_triangle(n, applied);
  };
  cfg.apply = [this](const std::vector<int>& applied) -> const TreeOracle& { return tree(applied); };
  return cfg;
}

int mis_exhaustive(const MisInstance& inst) {
  if (inst.n > 30) throw InstanceError("mis_exhaustive: n too large");
  std::vector<std::uint32_t> nbr(inst.n, 0);
  for (const auto& [a, b] : inst.edges) {
    nbr[a] |= 1u << b;
    nbr[b] |= 1u << a;
  }
  int best = 0;
  const std::uint64_t sets = std::uint64_t{1} << inst.n;
  for (std::uint64_t mask = 0; mask < sets; ++mask) {
    bool ok = true;
    for (int v = 0; v < inst.n && ok; ++v) {
      if ((mask >> v) & 1) ok = (nbr[v] & mask) == 0;
    }
    if (ok) best = std::max(best, std::popcount(mask));
  }
  return best;
}

}  // namespace iqbb
