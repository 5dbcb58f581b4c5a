#include "iqbb/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iqbb {

namespace {

constexpr double kTol = 1e-9;

// Tableau over columns [structural | slack/surplus | artificial] plus rhs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), t_((rows + 1) * (cols + 1), 0.0), rows_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // objective row is the last row
  double& obj(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

 private:
  std::size_t cols_;
  std::vector<double> t_;
  std::size_t rows_;
};

enum class Phase { kDone, kUnbounded };

// Minimizes the objective row over columns allowed[c]; Bland's rule.
Phase run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
          std::uint64_t& pivots, std::uint64_t cap) {
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.obj(c) < -kTol) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return Phase::kDone;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a > kTol) best = std::min(best, t.rhs(r) / a);
    }
    // ties in the ratio test go to the smallest basic index
    std::size_t leave = t.rows();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kTol || t.rhs(r) / a > best + kTol) continue;
      if (leave == t.rows() || basis[r] < basis[leave]) leave = r;
    }
    if (leave == t.rows()) return Phase::kUnbounded;
    if (++pivots > cap) throw std::runtime_error("simplex_lp: pivot cap reached");
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

LpResult simplex_lp(const LpProblem& lp, std::uint64_t pivot_cap) {
  const std::size_t n = lp.vars();
  std::vector<double> lo = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;
  if (lo.size() != n || (!lp.upper.empty() && lp.upper.size() != n)) {
    throw std::invalid_argument("simplex_lp: bound vectors must match the variable count");
  }
  // shift x = lo + y, y >= 0; upper bounds become rows
  std::vector<LpRow> rows;
  rows.reserve(lp.rows.size() + n);
  for (const LpRow& r : lp.rows) {
    if (r.a.size() != n) throw std::invalid_argument("simplex_lp: row length mismatch");
    LpRow s = r;
    for (std::size_t j = 0; j < n; ++j) s.b -= r.a[j] * lo[j];
    rows.push_back(std::move(s));
  }
  if (!lp.upper.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.upper[j] < lo[j] - kTol) return {};
      if (!std::isfinite(lp.upper[j])) continue;
      LpRow u;
      u.a.assign(n, 0.0);
      u.a[j] = 1.0;
      u.b = lp.upper[j] - lo[j];
      rows.push_back(std::move(u));
    }
  }
  for (LpRow& r : rows) {
    if (r.b < 0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == RowSense::kLessEqual) {
        r.sense = RowSense::kGreaterEqual;
      } else if (r.sense == RowSense::kGreaterEqual) {
        r.sense = RowSense::kLessEqual;
      }
    }
  }

  const std::size_t m = rows.size();
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  for (const LpRow& r : rows) {
    if (r.sense != RowSense::kEqual) ++slack_count;
    if (r.sense != RowSense::kLessEqual) ++art_count;
  }
  const std::size_t cols = n + slack_count + art_count;
  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_art(cols, false);
  std::size_t slack = n;
  std::size_t art = n + slack_count;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = rows[r].a[j];
    t.rhs(r) = rows[r].b;
    if (rows[r].sense == RowSense::kLessEqual) {
      t.at(r, slack) = 1.0;
      basis[r] = slack++;
    } else {
      if (rows[r].sense == RowSense::kGreaterEqual) t.at(r, slack++) = -1.0;
      t.at(r, art) = 1.0;
      is_art[art] = true;
      basis[r] = art++;
    }
  }

  LpResult out;
  if (art_count > 0) {
    // phase one: minimize the sum of artificials
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      for (std::size_t c = 0; c <= cols; ++c) {
        if (c < cols && is_art[c]) continue;
        t.obj(c) -= t.at(r, c);
      }
    }
    std::vector<bool> all(cols, true);
    run(t, basis, all, out.pivots, pivot_cap);
    if (-t.obj(cols) > 1e-7) return out;
    // drive zero-level artificials out of the basis where possible
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!is_art[c] && std::abs(t.at(r, c)) > kTol) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  // phase two objective row: reduced costs of c
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) t.obj(j) = lp.c[j];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = basis[r];
    if (b >= n || lp.c[b] == 0) continue;
    const double f = lp.c[b];
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= f * t.at(r, c);
  }
  std::vector<bool> allowed(cols, true);
  for (std::size_t c = 0; c < cols; ++c) allowed[c] = !is_art[c];
  if (run(t, basis, allowed, out.pivots, pivot_cap) == Phase::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.x = lo;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] += t.rhs(r);
  }
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += lp.c[j] * out.x[j];
  return out;
}

}  // namespace iqbb
