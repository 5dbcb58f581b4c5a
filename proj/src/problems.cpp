#include "iqbb/problems.hpp"

#include "iqbb/errors.hpp"

namespace iqbb {

std::unique_ptr<ProblemTree> make_problem_tree(const Instance& inst) {
  if (const auto* sk = std::get_if<SkInstance>(&inst)) return std::make_unique<SkTree>(*sk);
  if (const auto* mis = std::get_if<MisInstance>(&inst)) return std::make_unique<MisTree>(*mis);
  return std::make_unique<PortfolioTree>(std::get<PortfolioInstance>(inst));
}

double exhaustive_optimum(const Instance& inst) {
  if (const auto* sk = std::get_if<SkInstance>(&inst)) return sk_exhaustive(*sk);
  if (const auto* mis = std::get_if<MisInstance>(&inst)) return mis_exhaustive(*mis);
  const auto best = portfolio_exhaustive(std::get<PortfolioInstance>(inst));
  if (!best) throw InstanceError("portfolio instance has no feasible holding");
  return *best;
}

}  // namespace iqbb
