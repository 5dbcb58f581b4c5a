#include <algorithm>
#include <cmath>
#include <limits>

#include "iqbb/errors.hpp"
#include "iqbb/heuristics.hpp"
#include "iqbb/problems.hpp"

namespace iqbb {

namespace {

constexpr double kFeasTol = 1e-7;

int lot_cap(const PortfolioInstance& p, int i) {
  return static_cast<int>(std::floor(p.upper(i) + 1e-9));
}

}  // namespace

PortfolioTree::PortfolioTree(PortfolioInstance inst, int fw_iters, double fw_tol)
    : inst_(std::move(inst)), fw_iters_(fw_iters), fw_tol_(fw_tol) {
  const int n = inst_.n;
  if (n < 1 || inst_.mu.size() != static_cast<std::size_t>(n) ||
      inst_.prices.size() != static_cast<std::size_t>(n) ||
      inst_.sigma.size() != static_cast<std::size_t>(n) * n) {
    throw InstanceError("portfolio instance dimensions disagree");
  }
  if (inst_.risk < 0) throw InstanceError("portfolio risk aversion must be nonnegative");
  // objective range over every holding within the caps
  double lo = 0;
  double hi = 0;
  double risk_top = 0;
  for (int i = 0; i < n; ++i) {
    const double u = inst_.upper(i);
    lo -= std::max(0.0, inst_.mu[i]) * u;
    hi += std::max(0.0, -inst_.mu[i]) * u;
    for (int j = 0; j < n; ++j) risk_top += std::abs(inst_.sigma[static_cast<std::size_t>(i) * n + j]) * u * inst_.upper(j);
  }
  v_lo_ = lo - 1;
  v_hi_ = hi + inst_.risk * risk_top + 1;
  c_max_ = quantized(v_hi_) + 1;
  depth_ = n;
  for (int i = 0; i + 1 < n; ++i) depth_ += lot_cap(inst_, i);
}

Cost PortfolioTree::quantized(double v) const {
  return quantize(std::max(0.0, v - v_lo_), kCostResolution);
}

std::optional<double> PortfolioTree::evaluate(const std::vector<double>& x) const {
  const int n = inst_.n;
  if (x.size() != static_cast<std::size_t>(n)) return std::nullopt;
  double spend = 0;
  int held = 0;
  for (int i = 0; i < n; ++i) {
    if (x[i] < -kFeasTol) return std::nullopt;
    if (i + 1 < n && std::abs(x[i] - std::round(x[i])) > kFeasTol) return std::nullopt;
    if (x[i] > kFeasTol) {
      // a held asset carries at least one lot
      if (x[i] < 1 - kFeasTol) return std::nullopt;
      ++held;
    }
    if (inst_.prices[i] * x[i] > inst_.cap_fraction * inst_.budget * (1 + 1e-12) + kFeasTol) return std::nullopt;
    spend += inst_.prices[i] * x[i];
  }
  if (held != inst_.cardinality) return std::nullopt;
  if (std::abs(spend - inst_.budget) > kFeasTol * std::max(1.0, inst_.budget)) return std::nullopt;
  double risk = 0;
  double ret = 0;
  for (int i = 0; i < n; ++i) {
    ret += inst_.mu[i] * x[i];
    for (int j = 0; j < n; ++j) risk += x[i] * inst_.sigma[static_cast<std::size_t>(i) * n + j] * x[j];
  }
  return inst_.risk * risk - ret;
}

QpProblem PortfolioTree::relaxation(const State& s) const {
  const int n = inst_.n;
  const auto vars = static_cast<std::size_t>(2 * n);
  QpProblem qp;
  qp.sigma = inst_.sigma;
  qp.mu = inst_.mu;
  qp.risk = inst_.risk;
  LpProblem& lp = qp.region;
  lp.c.assign(vars, 0.0);
  lp.lower.assign(vars, 0.0);
  lp.upper.assign(vars, 1.0);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) {
      lp.lower[i] = s.lo[i];
      lp.upper[i] = s.hi[i];
    } else {
      lp.upper[i] = inst_.upper(i);
    }
    if (s.z[i] >= 0) lp.lower[n + i] = lp.upper[n + i] = s.z[i];
  }
  LpRow budget;
  budget.a.assign(vars, 0.0);
  for (int i = 0; i < n; ++i) budget.a[i] = inst_.prices[i];
  budget.sense = RowSense::kEqual;
  budget.b = inst_.budget;
  lp.rows.push_back(std::move(budget));
  LpRow card;
  card.a.assign(vars, 0.0);
  for (int i = 0; i < n; ++i) card.a[n + i] = 1.0;
  card.sense = RowSense::kEqual;
  card.b = inst_.cardinality;
  lp.rows.push_back(std::move(card));
  for (int i = 0; i < n; ++i) {
    LpRow cap;  // x_i <= U_i z_i
    cap.a.assign(vars, 0.0);
    cap.a[i] = 1.0;
    cap.a[n + i] = -inst_.upper(i);
    lp.rows.push_back(std::move(cap));
    LpRow floor;  // x_i >= z_i
    floor.a.assign(vars, 0.0);
    floor.a[i] = 1.0;
    floor.a[n + i] = -1.0;
    floor.sense = RowSense::kGreaterEqual;
    lp.rows.push_back(std::move(floor));
  }
  return qp;
}

std::shared_ptr<const PortfolioTree::State> PortfolioTree::compute(const NodeId& n,
                                                                   const State* parent) const {
  const int na = inst_.n;
  auto s = std::make_shared<State>();
  if (parent) {
    *s = *parent;
    s->branch_kind = -1;
    s->branch_var = -1;
    s->value.reset();
    const int bit = n.bit(n.depth() - 1);
    const int v = parent->branch_var;
    if (parent->branch_kind == 0) {
      s->z[v] = static_cast<std::int8_t>(bit);
      if (v + 1 < na) {
        if (bit == 0) s->hi[v] = 0;
        if (bit == 1) s->lo[v] = std::max(s->lo[v], 1);
      }
    } else if (bit == 0) {
      s->hi[v] = parent->split;
    } else {
      s->lo[v] = parent->split + 1;
    }
  } else {
    s->z.assign(na, -1);
    s->lo.assign(na, 0);
    s->hi.assign(na, 0);
    for (int i = 0; i + 1 < na; ++i) s->hi[i] = lot_cap(inst_, i);
  }
  const Cost floor_cost = parent ? parent->cost : 1;
  auto dead = [&] {
    s->cost = c_max_;
    return s;
  };
  for (int i = 0; i + 1 < na; ++i) {
    if (s->lo[i] > s->hi[i]) return dead();
  }

  const bool all_z = std::none_of(s->z.begin(), s->z.end(), [](std::int8_t z) { return z < 0; });
  bool all_lots = true;
  for (int i = 0; i + 1 < na; ++i) all_lots &= s->lo[i] == s->hi[i];
  if (all_z && all_lots) {
    // the last asset absorbs the remaining budget
    std::vector<double> x(na, 0.0);
    double spend = 0;
    for (int i = 0; i + 1 < na; ++i) {
      x[i] = s->lo[i];
      spend += inst_.prices[i] * x[i];
    }
    x[na - 1] = (inst_.budget - spend) / inst_.prices[na - 1];
    if (s->z[na - 1] == 0) {
      if (std::abs(x[na - 1]) > kFeasTol) return dead();
      x[na - 1] = 0;
    }
    for (int i = 0; i < na; ++i) {
      if ((s->z[i] == 1) != (x[i] > kFeasTol)) return dead();
    }
    s->value = evaluate(x);
    if (!s->value) return dead();
    s->cost = std::max(floor_cost, quantized(*s->value));
    return s;
  }

  const QpResult fw = frank_wolfe_qp(relaxation(*s), fw_iters_, fw_tol_);
  if (fw.status != LpStatus::kOptimal) return dead();
  const double lb = fw.lower_bound() - 1e-9 * (1 + std::abs(fw.lower_bound()));
  s->cost = std::min(c_max_ - 1, std::max(floor_cost, quantized(lb)));
  if (!all_z) {
    double best = -1;
    for (int i = 0; i < na; ++i) {
      if (s->z[i] >= 0) continue;
      const double zi = fw.x[na + i];
      const double frac = std::min(zi, 1 - zi);
      if (frac > best + 1e-12) {
        best = frac;
        s->branch_var = i;
      }
    }
    s->branch_kind = 0;
    return s;
  }
  double best = -1;
  for (int i = 0; i + 1 < na; ++i) {
    if (s->lo[i] == s->hi[i]) continue;
    const double frac = std::abs(fw.x[i] - std::round(fw.x[i]));
    if (frac > best + 1e-12) {
      best = frac;
      s->branch_var = i;
    }
  }
  const int v = s->branch_var;
  s->branch_kind = 1;
  s->split = std::clamp(static_cast<int>(std::floor(fw.x[v])), s->lo[v], s->hi[v] - 1);
  return s;
}

std::shared_ptr<const PortfolioTree::State> PortfolioTree::state(const NodeId& n) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(n); it != cache_.end()) return it->second;
  }
  std::shared_ptr<const State> parent;
  if (!n.is_root()) {
    parent = state(n.parent());
    if (parent->branch_kind < 0) throw std::invalid_argument("portfolio tree: node below a leaf");
  }
  auto s = compute(n, parent.get());
  std::lock_guard lock(mu_);
  return cache_.emplace(n, std::move(s)).first->second;
}

Children PortfolioTree::branch(const NodeId& n) const {
  if (state(n)->branch_kind < 0) return {};
  return {n.child(0), n.child(1)};
}

Cost PortfolioTree::cost(const NodeId& n) const { return state(n)->cost; }

TreeBounds PortfolioTree::bounds() const {
  TreeBounds b;
  b.depth = depth_;
  b.size = depth_ >= 62 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << (depth_ + 1)) - 1;
  b.c_max = c_max_;
  return b;
}

std::optional<double> PortfolioTree::leaf_value(const NodeId& leaf) const { return state(leaf)->value; }

std::optional<double> portfolio_exhaustive(const PortfolioInstance& inst) {
  const PortfolioTree scorer(inst);
  const int n = inst.n;
  std::vector<int> cap(n, 0);
  double combos = 1;
  for (int i = 0; i + 1 < n; ++i) {
    cap[i] = lot_cap(inst, i);
    combos *= cap[i] + 1;
  }
  if (combos > 5e7) throw InstanceError("portfolio_exhaustive: too many lot vectors");
  std::optional<double> best;
  std::vector<int> lots(n, 0);
  std::vector<double> x(n, 0.0);
  for (;;) {
    double spend = 0;
    for (int i = 0; i + 1 < n; ++i) {
      x[i] = lots[i];
      spend += inst.prices[i] * lots[i];
    }
    x[n - 1] = (inst.budget - spend) / inst.prices[n - 1];
    if (std::abs(x[n - 1]) <= kFeasTol) x[n - 1] = 0;
    if (const auto v = scorer.evaluate(x); v && (!best || *v < *best)) best = v;
    int i = 0;
    while (i + 1 < n && lots[i] == cap[i]) lots[i++] = 0;
    if (i + 1 >= n) break;
    ++lots[i];
  }
  return best;
}

}  // namespace iqbb
