#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iqbb/simplex.hpp"

namespace iqbb {

// min risk * x^T S x - mu^T x over the polytope of `region` (its c is ignored).
// S is row-major dim x dim and acts on the first dim variables; the remaining
// variables of the region carry no objective.
struct QpProblem {
  std::vector<double> sigma;
  std::vector<double> mu;
  double risk = 1.0;
  LpProblem region;
};

struct QpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0;  // objective at x, an upper bound on the optimum
  double gap = 0;    // Frank-Wolfe duality gap at x
  std::vector<double> x;
  int iterations = 0;

  double lower_bound() const { return value - gap; }
};

double qp_objective(const QpProblem& qp, std::span<const double> x);

// Frank-Wolfe with exact line search and a simplex linear oracle. Stops when
// the gap is <= tol or after max_iters linear-oracle calls.
QpResult frank_wolfe_qp(const QpProblem& qp, int max_iters = 200, double tol = 1e-6);

}  // namespace iqbb
