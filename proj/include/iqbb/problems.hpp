#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "iqbb/frank_wolfe.hpp"
#include "iqbb/incremental_solvers.hpp"
#include "iqbb/instances.hpp"
#include "iqbb/simplex.hpp"
#include "iqbb/tree_oracle.hpp"

namespace iqbb {

// Real objective values are quantized at this resolution into integer costs.
inline constexpr double kCostResolution = 1e-6;

// Branch and bound tree of a problem instance. Costs are quantized lower
// bounds on the objective of every leaf below, shifted to start at 1.
class ProblemTree : public TreeOracle {
 public:
  // Objective of a feasible leaf in problem units; none for infeasible leaves.
  virtual std::optional<double> leaf_value(const NodeId& leaf) const = 0;
  // True when leaf_value is maximized (cost order is still minimization).
  virtual bool maximizes() const { return false; }
};

// Nodes fix spins in index order; the bound adds -|J| for every pair with a free spin.
class SkTree final : public ProblemTree {
 public:
  explicit SkTree(SkInstance inst);

  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override;
  TreeBounds bounds() const override;
  std::optional<double> leaf_value(const NodeId& leaf) const override;

  // +1 for path bit 0, -1 for path bit 1.
  static int spin(const NodeId& n, int i) { return n.bit(i) ? -1 : 1; }
  double energy(const NodeId& leaf) const;

 private:
  SkInstance inst_;
  double abs_sum_ = 0;
};

// Edge LP relaxation (plus applied triangle cuts); branch on the most
// fractional vertex, child 0 excludes it and child 1 includes it.
class MisTree final : public ProblemTree {
 public:
  struct State {
    std::vector<std::int8_t> fixed;  // -1 free, 0 or 1
    std::vector<double> x;           // LP solution, empty when infeasible
    double lp_value = 0;
    int branch_var = -1;  // -1 at leaves
    Cost cost = 0;
  };

  explicit MisTree(MisInstance inst, std::vector<int> cuts = {});

  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override;
  TreeBounds bounds() const override;
  std::optional<double> leaf_value(const NodeId& leaf) const override;
  bool maximizes() const override { return true; }

  std::shared_ptr<const State> state(const NodeId& n) const;
  const MisInstance& instance() const { return inst_; }
  // Every triangle a < b < c of the graph; cut ids index this list.
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  // First triangle not in `skip` whose inequality the LP point at n violates.
  std::optional<int> violated_triangle(const NodeId& n, const std::vector<int>& skip) const;

 private:
  std::shared_ptr<const State> compute(const NodeId& n, const State* parent) const;

  MisInstance inst_;
  std::vector<int> cuts_;
  std::vector<std::array<int, 3>> triangles_;
  mutable std::mutex mu_;
  mutable std::unordered_map<NodeId, std::shared_ptr<const State>> cache_;
};

// Holds one MisTree per applied cut set and exposes triangle cuts to run_iqbc.
class MisCutFamily {
 public:
  MisCutFamily(MisInstance inst, int p) : inst_(std::move(inst)), p_(p) {}

  const MisTree& tree(const std::vector<int>& applied);
  CutConfig config();

 private:
  MisInstance inst_;
  int p_;
  std::map<std::vector<int>, std::unique_ptr<MisTree>> trees_;
};

// Indicator z_i per asset plus lots x_i. The relaxation keeps the budget,
// cardinality and cap rows with z in [0,1] and continuous lots, solved by
// Frank-Wolfe; its lower bound is the node cost. Branches fix z first
// (child 0: z=0), then split integer lot ranges; a leaf has every z and every
// integer lot fixed and the last asset takes the remaining budget.
class PortfolioTree final : public ProblemTree {
 public:
  struct State {
    std::vector<std::int8_t> z;     // -1 free, 0 or 1
    std::vector<int> lo;            // integer lot bounds, last entry unused
    std::vector<int> hi;
    int branch_kind = -1;           // -1 leaf, 0 indicator, 1 lot split
    int branch_var = -1;
    int split = 0;                  // lot split point: [lo, split] and [split+1, hi]
    std::optional<double> value;    // objective at a feasible leaf
    Cost cost = 0;
  };

  explicit PortfolioTree(PortfolioInstance inst, int fw_iters = 200, double fw_tol = 1e-7);

  Children branch(const NodeId& n) const override;
  Cost cost(const NodeId& n) const override;
  TreeBounds bounds() const override;
  std::optional<double> leaf_value(const NodeId& leaf) const override;

  std::shared_ptr<const State> state(const NodeId& n) const;
  // Objective of a holding, or none if it violates a constraint.
  std::optional<double> evaluate(const std::vector<double>& x) const;
  const PortfolioInstance& instance() const { return inst_; }
  // Relaxation of the root: every indicator and lot free.
  QpProblem relaxation(const State& s) const;

 private:
  std::shared_ptr<const State> compute(const NodeId& n, const State* parent) const;
  Cost quantized(double v) const;

  PortfolioInstance inst_;
  int fw_iters_;
  double fw_tol_;
  double v_lo_ = 0;
  double v_hi_ = 0;
  Cost c_max_ = 1;
  int depth_ = 0;
  mutable std::mutex mu_;
  mutable std::unordered_map<NodeId, std::shared_ptr<const State>> cache_;
};

std::unique_ptr<ProblemTree> make_problem_tree(const Instance& inst);

// Exhaustive optima in problem units.
double sk_exhaustive(const SkInstance& inst);
int mis_exhaustive(const MisInstance& inst);
std::optional<double> portfolio_exhaustive(const PortfolioInstance& inst);
double exhaustive_optimum(const Instance& inst);

}  // namespace iqbb
