#include "iqbb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "iqbb/classical_search.hpp"
#include "iqbb/errors.hpp"
#include "iqbb/incremental_solvers.hpp"
#include "iqbb/problems.hpp"

namespace iqbb {

SolverKind parse_solver(std::string_view name) {
  if (name == "classical") return SolverKind::kClassical;
  if (name == "iqbb") return SolverKind::kIqbb;
  throw std::invalid_argument("unknown solver: " + std::string(name));
}

std::string_view solver_name(SolverKind kind) {
  return kind == SolverKind::kClassical ? "classical" : "iqbb";
}

std::vector<int> ExperimentConfig::grid() const {
  std::vector<int> out;
  for (int n = n_min; n <= n_max; n += n_step) out.push_back(n);
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of(" \t=");
    if (sep == std::string::npos) throw ConfigError("config line without a value: '" + line + "'");
    const std::string key = line.substr(0, sep);
    std::string value = trim(line.substr(sep));
    if (!value.empty() && value[0] == '=') value = trim(value.substr(1));
    try {
      if (key == "kind") {
        c.kind = parse_problem_kind(value);
      } else if (key == "n_min") {
        c.n_min = parse_number<int>(key, value);
      } else if (key == "n_max") {
        c.n_max = parse_number<int>(key, value);
      } else if (key == "n_step") {
        c.n_step = parse_number<int>(key, value);
      } else if (key == "seeds") {
        c.seeds = parse_number<int>(key, value);
      } else if (key == "heuristic") {
        c.heuristic = parse_heuristic(value);
      } else if (key == "eps") {
        c.eps = parse_number<Cost>(key, value);
      } else if (key == "solver") {
        c.solver = parse_solver(value);
      } else if (key == "jobs") {
        c.jobs = parse_number<int>(key, value);
      } else if (key == "out") {
        c.out = value;
      } else if (key == "delta") {
        c.delta = parse_number<double>(key, value);
      } else if (key == "estimator" || key == "mode") {
        c.mode = EstimatorMode::parse(value);
      } else if (key == "charge_polylog") {
        if (value != "on" && value != "off") throw ConfigError("charge_polylog must be on or off");
        c.charge_polylog = value == "on";
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.n_step < 1) throw ConfigError("n_step must be positive");
  if (c.seeds < 0) throw ConfigError("seeds must be nonnegative");
  if (c.jobs < 1) throw ConfigError("jobs must be positive");
  if (!(c.delta > 0 && c.delta < 1)) throw ConfigError("delta must lie in (0,1)");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return parse_config(in);
}

bool ExperimentRecord::same_result(const ExperimentRecord& o) const {
  return kind == o.kind && n == o.n && seed == o.seed && heuristic == o.heuristic && eps == o.eps &&
         solver == o.solver && q == o.q && d_max == o.d_max && charged_quantum == o.charged_quantum &&
         value == o.value;
}

ExperimentRecord run_instance(const ExperimentConfig& config, int n, std::uint64_t seed) {
  const Instance inst = gen_instance(config.kind, n, seed);
  const auto tree = make_problem_tree(inst);
  ExperimentRecord r;
  r.kind = config.kind;
  r.n = n;
  r.seed = seed;
  r.heuristic = config.heuristic;
  r.eps = config.eps;
  r.solver = config.solver;

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  QueryLedger classical_ledger;
  const BnbResult classical = classical_bnb(*tree, config.heuristic, config.eps, classical_ledger);
  const auto t1 = Clock::now();
  r.q = classical.trace.q();
  r.d_max = classical.trace.d_max_seen;
  NodeId leaf = classical.leaf;
  r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (config.solver == SolverKind::kIqbb) {
    SolverParams params;
    params.heuristic = config.heuristic;
    params.eps = config.eps;
    params.delta = config.delta;
    params.mode = config.mode;
    params.policy.include_polylog = config.charge_polylog;
    QueryLedger ledger;
    const IqbbResult q = run_iqbb(*tree, params, ledger);
    r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t1).count();
    r.charged_quantum = ledger.charged_quantum;
    leaf = q.leaf;
  }
  const auto value = tree->leaf_value(leaf);
  if (!value) throw InstanceError("solver returned an infeasible leaf");
  r.value = *value;
  return r;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config, const RecordSink& on_record,
                                             const FailureSink& on_failure) {
  struct Task {
    int n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int n : config.grid()) {
    for (int s = 0; s < config.seeds; ++s) tasks.push_back({n, static_cast<std::uint64_t>(s)});
  }
  std::vector<ExperimentRecord> records;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      try {
        ExperimentRecord r = run_instance(config, t.n, t.seed);
        const std::lock_guard lock(mu);
        if (on_record) on_record(r);
        records.push_back(std::move(r));
      } catch (const std::exception& e) {
        const std::lock_guard lock(mu);
        if (on_failure) on_failure({t.n, t.seed, e.what()});
      }
    }
  };
  const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.n, a.seed) < std::tie(b.n, b.seed);
  });
  return records;
}

namespace {

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T field(const std::string& text, std::size_t line) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw FormatError("csv line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const ExperimentRecord& r) {
  out << problem_kind_name(r.kind) << ',' << r.n << ',' << r.seed << ',' << heuristic_name(r.heuristic)
      << ',' << r.eps << ',' << solver_name(r.solver) << ',' << r.q << ',' << r.d_max << ','
      << exact(r.charged_quantum) << ',' << exact(r.value) << ',' << exact(r.wall_ms) << '\n';
}

void write_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  write_csv_header(out);
  for (const ExperimentRecord& r : records) write_csv_row(out, r);
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) throw FormatError("csv header mismatch");
  std::vector<ExperimentRecord> out;
  for (std::size_t no = 2; std::getline(in, line); ++no) {
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) throw FormatError("csv line " + std::to_string(no) + ": expected 11 fields");
    ExperimentRecord r;
    try {
      r.kind = parse_problem_kind(f[0]);
      r.heuristic = parse_heuristic(f[3]);
      r.solver = parse_solver(f[5]);
    } catch (const std::invalid_argument& e) {
      throw FormatError("csv line " + std::to_string(no) + ": " + e.what());
    }
    r.n = field<int>(f[1], no);
    r.seed = field<std::uint64_t>(f[2], no);
    r.eps = field<Cost>(f[4], no);
    r.q = field<std::uint64_t>(f[6], no);
    r.d_max = field<int>(f[7], no);
    r.charged_quantum = field<double>(f[8], no);
    r.value = field<double>(f[9], no);
    r.wall_ms = field<double>(f[10], no);
    out.push_back(r);
  }
  return out;
}

std::vector<ExperimentRecord> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  return read_csv(in);
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least squares needs 2+ paired points");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least squares needs 2+ distinct x");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    sse += e * e;
  }
  fit.r2 = syy == 0 ? 1.0 : 1.0 - sse / syy;
  return fit;
}

ScalingFit fit_scaling(std::span<const ExperimentRecord> records) {
  std::map<int, std::vector<double>> by_n;
  for (const ExperimentRecord& r : records) by_n[r.n].push_back(static_cast<double>(r.q));
  if (by_n.size() < 3) throw std::invalid_argument("fit_scaling needs at least 3 distinct n");
  ScalingFit fit;
  std::vector<double> xs, ys;
  for (const auto& [n, qs] : by_n) {
    const double med = median(qs);
    if (!(med > 0)) throw std::invalid_argument("fit_scaling needs positive Q");
    fit.medians[n] = med;
    fit.means[n] = std::accumulate(qs.begin(), qs.end(), 0.0) / static_cast<double>(qs.size());
    xs.push_back(n);
    ys.push_back(std::log2(med));
  }
  const LineFit line = least_squares(xs, ys);
  fit.alpha = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;
  fit.n_min = by_n.begin()->first;
  fit.n_max = by_n.rbegin()->first;
  return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) out[idx[k]] = avg;
    i = j + 1;
  }
  return out;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman needs paired samples");
  if (x.size() < 2) return std::nullopt;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double k = static_cast<double>(x.size());
  const double m = (k + 1) / 2;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - m) * (ry[i] - m);
    sxx += (rx[i] - m) * (rx[i] - m);
    syy += (ry[i] - m) * (ry[i] - m);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

Report make_report(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("report needs at least one record");
  std::map<int, double> ratio;
  std::map<int, std::vector<double>> qs;
  for (const ExperimentRecord& r : records) {
    const double v = r.d_max / (static_cast<double>(r.n) * r.n);
    auto [it, fresh] = ratio.emplace(r.n, v);
    if (!fresh) it->second = std::max(it->second, v);
    qs[r.n].push_back(static_cast<double>(r.q));
  }
  Report rep;
  std::vector<double> ns, vs;
  for (const auto& [n, v] : ratio) {
    rep.depth.push_back({n, v});
    ns.push_back(n);
    vs.push_back(v);
  }
  rep.depth_trend = spearman(ns, vs);
  const auto& [top_n, top_q] = *qs.rbegin();
  rep.spread_n = top_n;
  const auto [lo, hi] = std::minmax_element(top_q.begin(), top_q.end());
  rep.spread_percent = 100.0 * (*hi - *lo) / median(top_q);
  return rep;
}

void print_report(std::ostream& out, const Report& report) {
  out << "n,max_depth_over_n2\n";
  for (const DepthRow& row : report.depth) out << row.n << ',' << exact(row.max_ratio) << '\n';
  out << "depth_trend_spearman,";
  if (report.depth_trend) {
    out << exact(*report.depth_trend) << '\n';
  } else {
    out << "insufficient data\n";
  }
  out << "spread_n," << report.spread_n << '\n';
  out << "spread_percent," << exact(report.spread_percent) << '\n';
}

}  // namespace iqbb
