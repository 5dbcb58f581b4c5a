#include "iqbb/quantum_primitives.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace iqbb {

double ChargePolicy::search_charge(double t, int d, double delta, std::uint64_t marked) const {
  const double dd = d;
  if (search == SearchFormula::kJarretWan) {
    const double m = static_cast<double>(std::max<std::uint64_t>(marked, 1));
    double c = std::sqrt(t * dd);
    if (include_polylog) c *= std::pow(std::log(m * dd), 4) * std::log(m / delta);
    return prefactor * c;
  }
  double c = std::sqrt(t) * dd;
  if (include_polylog) c *= std::log(dd) * std::log(1.0 / delta);
  return prefactor * c;
}

double ChargePolicy::size_charge(double t0, int d, double delta, double eps) const {
  double c = std::sqrt(t0 * d) / std::pow(eps, 1.5);
  if (include_polylog) c *= std::pow(std::log(1.0 / delta), 2);
  return prefactor * c;
}

double ChargePolicy::minleaf_charge(double t, int d, double c_max, double delta) const {
  double c = std::sqrt(t) * d;
  if (include_polylog) c *= std::log(c_max) * std::pow(std::log(1.0 / delta), 2);
  return prefactor * c;
}

EstimatorMode EstimatorMode::parse(std::string_view text) {
  if (text == "exact") return exact();
  constexpr std::string_view prefix = "adversarial:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string seed(text.substr(prefix.size()));
    std::size_t used = 0;
    const unsigned long long value = seed.empty() ? 0 : std::stoull(seed, &used);
    if (seed.empty() || used != seed.size()) {
      throw std::invalid_argument("estimator seed must be an integer");
    }
    return adversarial(value);
  }
  throw std::invalid_argument("estimator must be exact or adversarial:<seed>");
}

std::string EstimatorMode::to_string() const {
  return kind == Kind::kExact ? "exact" : "adversarial:" + std::to_string(seed);
}

std::uint64_t count_nodes(const TreeOracle& tree, std::uint64_t cap) {
  if (tree.empty()) return 0;
  std::uint64_t n = 0;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty() && n <= cap) {
    const NodeId x = stack.back();
    stack.pop_back();
    ++n;
    for (const NodeId& k : tree.branch(x)) stack.push_back(k);
  }
  return n;
}

QuantumEmulator::QuantumEmulator(QueryLedger& ledger, ChargePolicy policy, EstimatorMode mode)
    : ledger_(ledger), policy_(policy), mode_(mode), rng_(mode.seed) {}

std::optional<NodeId> QuantumEmulator::qtsearch(const TreeOracle& tree, int d, double t,
                                                const MarkFn& f, double delta) {
  std::optional<NodeId> best;
  std::uint64_t marked = 0;
  for_each_node(tree, [&](const NodeId& n, const Children&) {
    if (f(n)) {
      ++marked;
      if (!best || n < *best) best = n;
    }
  });
  ledger_.charge({Primitive::kTreeSearch, t, d, delta, policy_.search_charge(t, d, delta, marked)});
  return best;
}

std::optional<double> QuantumEmulator::qtsize(const TreeOracle& tree, int d, double t0,
                                              double delta, double eps) {
  return qtsize([&tree](std::uint64_t cap) { return count_nodes(tree, cap); }, d, t0, delta, eps);
}

std::optional<double> QuantumEmulator::qtsize(const SizeCounter& count, int d, double t0,
                                              double delta, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("qtsize: eps must lie in (0,1)");
  if (t0 < 1) throw std::invalid_argument("qtsize: T0 must be at least 1");
  ledger_.charge({Primitive::kTreeSize, t0, d, delta, policy_.size_charge(t0, d, delta, eps)});
  const double grow = (1 + eps) * (1 + eps);
  const double band_top = t0 * grow;
  const auto cap = static_cast<std::uint64_t>(std::ceil(band_top)) + 1;
  const double size = static_cast<double>(count(cap));
  if (mode_.kind == EstimatorMode::Kind::kExact) {
    if (size > t0) return std::nullopt;
    return size;
  }
  if (size <= t0) {
    const double hi = std::min(size * grow, t0 * (1 + eps));
    return std::uniform_real_distribution<double>(size, std::max(size, hi))(rng_);
  }
  if (size >= band_top) return std::nullopt;
  if (std::bernoulli_distribution(0.5)(rng_)) return std::nullopt;
  return std::uniform_real_distribution<double>(size, size * grow)(rng_);
}

NodeId QuantumEmulator::qtminleaf(const TreeOracle& tree, const CostFn& cost, int d, double c_max,
                                  double t, double delta) {
  if (tree.empty()) throw std::invalid_argument("qtminleaf: empty tree");
  std::optional<NodeId> best;
  Cost best_cost = 0;
  for_each_node(tree, [&](const NodeId& n, const Children& kids) {
    if (!kids.empty()) return;
    const Cost c = cost(n);
    if (!best || c < best_cost || (c == best_cost && n < *best)) {
      best = n;
      best_cost = c;
    }
  });
  ledger_.charge({Primitive::kMinLeaf, t, d, delta, policy_.minleaf_charge(t, d, c_max, delta)});
  return *best;
}

}  // namespace iqbb
