#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqbb/heuristics.hpp"
#include "iqbb/instances.hpp"
#include "iqbb/quantum_primitives.hpp"

namespace iqbb {

// Malformed experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SolverKind { kClassical, kIqbb };

SolverKind parse_solver(std::string_view name);
std::string_view solver_name(SolverKind kind);

struct ExperimentConfig {
  ProblemKind kind = ProblemKind::kSk;
  int n_min = 8;
  int n_max = 8;  // n_max < n_min gives an empty grid
  int n_step = 1;
  int seeds = 1;
  HeuristicKind heuristic = HeuristicKind::kCostBased;
  Cost eps = 0;
  SolverKind solver = SolverKind::kClassical;
  int jobs = 1;
  std::string out;  // CSV path; empty writes nothing
  double delta = 0.1;
  EstimatorMode mode{};
  bool charge_polylog = true;

  std::vector<int> grid() const;
};

// Flat "key value" or "key = value" lines; '#' starts a comment.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct ExperimentRecord {
  ProblemKind kind = ProblemKind::kSk;
  int n = 0;
  std::uint64_t seed = 0;
  HeuristicKind heuristic = HeuristicKind::kCostBased;
  Cost eps = 0;
  SolverKind solver = SolverKind::kClassical;
  std::uint64_t q = 0;  // classical pops on the same instance
  int d_max = 0;
  double charged_quantum = 0;  // zero for the classical solver
  double value = 0;            // objective of the returned leaf in problem units
  double wall_ms = 0;

  bool same_result(const ExperimentRecord& o) const;
};

struct ExperimentFailure {
  int n = 0;
  std::uint64_t seed = 0;
  std::string message;
};

// Solves one generated instance with the configured solver.
ExperimentRecord run_instance(const ExperimentConfig& config, int n, std::uint64_t seed);

using RecordSink = std::function<void(const ExperimentRecord&)>;
using FailureSink = std::function<void(const ExperimentFailure&)>;

// One record per (n, seed), seeds 0..seeds-1, run on up to config.jobs threads.
// Sinks are called under a lock as instances complete. The returned records
// are sorted by (n, seed); failed instances are reported and skipped.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RecordSink& on_record = {},
                                             const FailureSink& on_failure = {});

inline constexpr std::string_view kCsvHeader =
    "kind,n,seed,heuristic,eps,solver,Q,d_max,charged_quantum,value,wall_ms";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ExperimentRecord& r);
void write_csv(std::ostream& out, std::span<const ExperimentRecord> records);
std::vector<ExperimentRecord> read_csv(std::istream& in);
std::vector<ExperimentRecord> load_csv(const std::string& path);

double median(std::vector<double> v);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 1;
};

// Least squares y = slope x + intercept; r2 is 1 when y has no variance.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct ScalingFit {
  double alpha = 0;  // log2 Q ~ alpha n + intercept
  double intercept = 0;
  double r2 = 1;
  int n_min = 0;
  int n_max = 0;
  std::map<int, double> medians;
  std::map<int, double> means;

  double projected_quantum() const { return alpha / 2; }
};

// Regression of log2(median Q) on n. Throws std::invalid_argument below 3 distinct n.
ScalingFit fit_scaling(std::span<const ExperimentRecord> records);

// Rank correlation with average ranks for ties; none below 2 points or with a constant input.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct DepthRow {
  int n = 0;
  double max_ratio = 0;  // max d_max / n^2
};

struct Report {
  std::vector<DepthRow> depth;
  std::optional<double> depth_trend;  // Spearman of max_ratio against n
  int spread_n = 0;
  double spread_percent = 0;  // (max Q - min Q) / median Q at the largest n
};

// Throws std::invalid_argument on an empty record set.
Report make_report(std::span<const ExperimentRecord> records);
void print_report(std::ostream& out, const Report& report);

}  // namespace iqbb
