#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace iqbb {

enum class ProblemKind { kSk, kMis, kPortfolio };

ProblemKind parse_problem_kind(std::string_view name);
std::string_view problem_kind_name(ProblemKind kind);

// Couplings J (row-major, symmetric, zero diagonal) with energy sum_{i<j} J_ij s_i s_j.
struct SkInstance {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> coupling;

  double j(int a, int b) const { return coupling[static_cast<std::size_t>(a) * n + b]; }
};

struct MisInstance {
  int n = 0;
  std::uint64_t seed = 0;
  double edge_probability = 0.8;
  std::vector<std::pair<int, int>> edges;  // a < b, sorted, no repeats
};

// min risk x^T S x - mu^T x with prices^T x = budget, exactly `cardinality`
// assets held, prices_i x_i <= cap_fraction * budget, integer lots except the
// last asset.
struct PortfolioInstance {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> mu;
  std::vector<double> sigma;  // row-major n x n, PSD
  std::vector<double> prices;
  double budget = 0;
  double risk = 0.5;
  int cardinality = 1;
  double cap_fraction = 0.1;

  // Largest holding allowed by the cap for asset i.
  double upper(int i) const { return cap_fraction * budget / prices[i]; }
};

using Instance = std::variant<SkInstance, MisInstance, PortfolioInstance>;

ProblemKind kind_of(const Instance& inst);
int size_of(const Instance& inst);

SkInstance gen_sk(int n, std::uint64_t seed);
MisInstance gen_mis(int n, std::uint64_t seed, double edge_probability = 0.8);
PortfolioInstance gen_portfolio(int n, std::uint64_t seed);
// Deterministic in (kind, n, seed). Throws InstanceError for n < 2.
Instance gen_instance(ProblemKind kind, int n, std::uint64_t seed);

void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);
void save_instance(const std::filesystem::path& path, const Instance& inst);
Instance load_instance(const std::filesystem::path& path);

}  // namespace iqbb
