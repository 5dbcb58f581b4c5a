#include "iqbb/frank_wolfe.hpp"

#include <algorithm>
#include <stdexcept>

namespace iqbb {

namespace {

std::vector<double> gradient(const QpProblem& qp, std::span<const double> x) {
  const std::size_t dim = qp.mu.size();
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < dim; ++j) s += qp.sigma[i * dim + j] * x[j];
    g[i] = 2 * qp.risk * s - qp.mu[i];
  }
  return g;
}

double quad(const QpProblem& qp, std::span<const double> d) {
  const std::size_t dim = qp.mu.size();
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) s += d[i] * qp.sigma[i * dim + j] * d[j];
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double qp_objective(const QpProblem& qp, std::span<const double> x) {
  const std::size_t dim = qp.mu.size();
  return qp.risk * quad(qp, x.subspan(0, dim)) - dot(qp.mu, x.subspan(0, dim));
}

QpResult frank_wolfe_qp(const QpProblem& qp, int max_iters, double tol) {
  const std::size_t dim = qp.mu.size();
  if (qp.sigma.size() != dim * dim || qp.region.vars() < dim) {
    throw std::invalid_argument("frank_wolfe_qp: dimension mismatch");
  }
  LpProblem lmo = qp.region;
  std::fill(lmo.c.begin(), lmo.c.end(), 0.0);
  std::copy(qp.mu.begin(), qp.mu.end(), lmo.c.begin());
  for (double& v : lmo.c) v = -v;
  // start at the minimizer of the linear part
  LpResult start = simplex_lp(lmo);
  QpResult out;
  out.status = start.status;
  if (start.status != LpStatus::kOptimal) return out;
  std::vector<double> x = std::move(start.x);
  // the gap is always measured at the returned point
  for (;;) {
    const std::vector<double> g = gradient(qp, x);
    lmo.c = g;
    const LpResult s = simplex_lp(lmo);
    ++out.iterations;
    if (s.status != LpStatus::kOptimal) throw std::runtime_error("frank_wolfe_qp: linear oracle failed");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = s.x[i] - x[i];
    out.gap = std::max(0.0, -dot(g, d));
    if (out.gap <= tol || out.iterations >= max_iters) break;
    // exact minimizer of the quadratic along d
    const double curv = 2 * qp.risk * quad(qp, std::span<const double>(d).subspan(0, dim));
    const double step = curv > 0 ? std::clamp(out.gap / curv, 0.0, 1.0) : 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step * d[i];
  }
  out.value = qp_objective(qp, x);
  out.x = std::move(x);
  out.status = LpStatus::kOptimal;
  return out;
}

}  // namespace iqbb
