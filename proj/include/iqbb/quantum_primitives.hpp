#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "iqbb/classical_search.hpp"
#include "iqbb/tree_oracle.hpp"

namespace iqbb {

enum class SearchFormula { kApers, kJarretWan };

struct ChargePolicy {
  SearchFormula search = SearchFormula::kApers;
  double prefactor = 1.0;
  bool include_polylog = true;

  // sqrt(T) d log(d) log(1/delta), or sqrt(T d) log^4(m d) log(m/delta)
  double search_charge(double t, int d, double delta, std::uint64_t marked = 1) const;
  // sqrt(T0 d) / eps^{3/2} log^2(1/delta)
  double size_charge(double t0, int d, double delta, double eps) const;
  // sqrt(T) d log(c_max) log^2(1/delta)
  double minleaf_charge(double t, int d, double c_max, double delta) const;
};

struct EstimatorMode {
  enum class Kind { kExact, kAdversarial };
  Kind kind = Kind::kExact;
  std::uint64_t seed = 0;

  static EstimatorMode exact() { return {}; }
  static EstimatorMode adversarial(std::uint64_t seed) { return {Kind::kAdversarial, seed}; }
  // "exact" or "adversarial:<seed>"
  static EstimatorMode parse(std::string_view text);
  std::string to_string() const;
};

// Returns min(true size, cap + 1) for a tree whose size is being estimated.
using SizeCounter = std::function<std::uint64_t(std::uint64_t cap)>;
using CostFn = std::function<Cost(const NodeId&)>;

// Exact classical stand-ins for the quantum tree primitives. Answers come from
// traversal; the query cost a quantum routine would incur is charged to the
// ledger.
class QuantumEmulator {
 public:
  QuantumEmulator(QueryLedger& ledger, ChargePolicy policy = {}, EstimatorMode mode = {});

  // Smallest marked node in path order, or none.
  std::optional<NodeId> qtsearch(const TreeOracle& tree, int d, double t, const MarkFn& f,
                                 double delta);

  // Estimate of the tree size, or none for "more than T0 nodes".
  std::optional<double> qtsize(const TreeOracle& tree, int d, double t0, double delta, double eps);
  std::optional<double> qtsize(const SizeCounter& count, int d, double t0, double delta,
                               double eps);

  // Minimum-cost leaf, ties by path order. Rejects an empty tree.
  NodeId qtminleaf(const TreeOracle& tree, const CostFn& cost, int d, double c_max, double t,
                   double delta);

  QueryLedger& ledger() { return ledger_; }
  const ChargePolicy& policy() const { return policy_; }
  const EstimatorMode& mode() const { return mode_; }

 private:
  QueryLedger& ledger_;
  ChargePolicy policy_;
  EstimatorMode mode_;
  std::mt19937_64 rng_;
};

// Number of nodes of tree, capped at cap + 1.
std::uint64_t count_nodes(const TreeOracle& tree, std::uint64_t cap);

}  // namespace iqbb
