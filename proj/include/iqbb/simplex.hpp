#pragma once

#include <cstdint>
#include <vector>

namespace iqbb {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> a;  // one coefficient per variable
  RowSense sense = RowSense::kLessEqual;
  double b = 0;
};

// min c^T x subject to rows and lower <= x <= upper (finite bounds).
struct LpProblem {
  std::vector<double> c;
  std::vector<LpRow> rows;
  std::vector<double> lower;  // empty means all zero
  std::vector<double> upper;  // empty means unbounded above

  std::size_t vars() const { return c.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0;
  std::vector<double> x;
  std::uint64_t pivots = 0;
};

// Dense two-phase tableau simplex with Bland's rule; 1e-9 pivot and reduced-cost
// tolerance. Throws std::runtime_error past the pivot cap.
LpResult simplex_lp(const LpProblem& lp, std::uint64_t pivot_cap = 200000);

}  // namespace iqbb
