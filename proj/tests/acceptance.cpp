// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "iqbb/bench.hpp"
#include "iqbb/classical_search.hpp"
#include "iqbb/incremental_solvers.hpp"
#include "iqbb/problems.hpp"
#include "iqbb/subtree_gen.hpp"
#include "support/shadow.hpp"
#include "support/trees.hpp"

using namespace iqbb;
using iqbb::testing::ShadowChecker;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- criteria 1 and 2: subtree generation over random trees ----

struct SubtreeTally {
  std::uint64_t runs = 0;
  std::uint64_t contain_fail = 0;
  std::uint64_t size_fail = 0;
  std::uint64_t exact_calls = 0;
  std::uint64_t exact_mismatch = 0;
  std::uint64_t adversarial_calls = 0;
  std::uint64_t adversarial_mismatch = 0;
  std::uint64_t invariant_breaks = 0;
};

void subtree_run(const ExplicitTree& base, EstimatorMode mode, SubtreeTally& tally) {
  const LocalHcost hc = total_order(base.stored_hcost(), base.bounds().depth);
  const ExplorationTrace full = full_trace(base, hc);
  const auto size = static_cast<double>(base.size());
  const bool exact = mode.kind == EstimatorMode::Kind::kExact;
  for (int m = 0; std::ldexp(1.0, m) <= 2 * size; ++m) {
    QueryLedger ledger;
    QuantumEmulator emu(ledger, {}, EstimatorMode{mode.kind, mode.seed + static_cast<std::uint64_t>(m)});
    ShadowChecker shadow(base, hc, mode, &full);
    const SubtreeCertificate cert = qsubtree_local(base, hc, m, 0.1, emu, &shadow);
    const CertificateTree view(base, hc, cert);
    const CertificateReport rep = verify_certificate(view, full, m);
    ++tally.runs;
    tally.contain_fail += rep.contains_first ? 0 : 1;
    tally.size_fail += static_cast<double>(rep.node_count) <= cert.node_bound() ? 0 : 1;
    const std::uint64_t calls = shadow.kth_calls + shadow.next_calls;
    (exact ? tally.exact_calls : tally.adversarial_calls) += calls;
    (exact ? tally.exact_mismatch : tally.adversarial_mismatch) += shadow.mismatches;
    tally.invariant_breaks += shadow.invariant_breaks;
  }
}

void criteria_subtree() {
  constexpr int kTrees = 500;
  const auto t0 = Clock::now();
  SubtreeTally tally;
  int max_depth = 0;
  std::uint64_t max_nodes = 0;
  for (int i = 0; i < kTrees; ++i) {
    const auto seed = 100000 + static_cast<std::uint64_t>(i);
    const ExplicitTree base =
        i % 2 ? iqbb::testing::random_dense_tree(seed) : iqbb::testing::random_corpus_tree(seed);
    max_depth = std::max(max_depth, base.bounds().depth);
    max_nodes = std::max<std::uint64_t>(max_nodes, base.size());
    subtree_run(base, EstimatorMode::exact(), tally);
    subtree_run(base, EstimatorMode::adversarial(static_cast<std::uint64_t>(i)), tally);
  }
  const double secs = seconds_since(t0);
  const bool pass1 = tally.contain_fail == 0 && tally.size_fail == 0 && secs < 120 && max_depth <= 12 &&
                     max_nodes <= 4096;
  verdict(1, pass1,
          std::to_string(kTrees) + " trees (depth <= " + std::to_string(max_depth) + ", nodes <= " +
              std::to_string(max_nodes) + "), " + std::to_string(tally.runs) +
              " certificates over both estimator modes; containment failures " +
              std::to_string(tally.contain_fail) + ", size-bound failures " + std::to_string(tally.size_fail) +
              ", runtime " + fmt("%.1f", secs) + " s");
  const bool pass2 = tally.exact_mismatch == 0 && tally.adversarial_mismatch == 0 && tally.exact_calls > 0 &&
                     tally.invariant_breaks == 0;
  verdict(2, pass2,
          std::to_string(tally.exact_calls) + " exact-mode kthcost/nextcost calls with " +
              std::to_string(tally.exact_mismatch) + " mismatches against sorted hcost; " +
              std::to_string(tally.adversarial_calls) + " adversarial-mode calls with " +
              std::to_string(tally.adversarial_mismatch) + " outside the estimator contract");
}

// ---- criterion 3: primitives against brute force ----

void criterion_primitives() {
  std::mt19937_64 rng(31337);
  int agree = 0;
  constexpr int kTrees = 200;
  for (int trial = 0; trial < kTrees; ++trial) {
    const ExplicitTree t = iqbb::testing::random_corpus_tree(200000 + static_cast<std::uint64_t>(trial));
    QueryLedger ledger;
    QuantumEmulator emu(ledger);
    const auto size = static_cast<double>(t.size());
    const int d = std::max(1, t.bounds().depth);
    const double p = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
    std::unordered_set<NodeId> marked;
    std::optional<NodeId> first_marked;
    const ExplicitNode* best_leaf = nullptr;
    for (const ExplicitNode& n : t.nodes()) {
      if (std::bernoulli_distribution(p)(rng)) {
        marked.insert(n.id);
        if (!first_marked || n.id < *first_marked) first_marked = n.id;
      }
      if (n.child_count == 0 &&
          (!best_leaf || n.cost < best_leaf->cost || (n.cost == best_leaf->cost && n.id < best_leaf->id))) {
        best_leaf = &n;
      }
    }
    const auto found = emu.qtsearch(t, d, size, [&](const NodeId& n) { return marked.count(n) > 0; }, 0.05);
    const NodeId leaf = emu.qtminleaf(
        t, [&](const NodeId& n) { return t.cost(n); }, d, static_cast<double>(t.bounds().c_max), size, 0.05);
    agree += (found == first_marked && leaf == best_leaf->id) ? 1 : 0;
  }
  verdict(3, agree == kTrees,
          std::to_string(agree) + "/" + std::to_string(kTrees) + " trees where qtsearch and qtminleaf equal brute force");
}

// ---- criteria 4, 5, 6: problem corpus ----

struct CorpusRun {
  std::string family;
  bool value_ok = false;
  bool classical_ok = false;
  bool bracket_ok = true;
  std::uint64_t q = 0;
  double charged = 0;
  double ratio = 0;  // charged / (sqrt(Q) d log(c_max h_max) log^2(log T / delta))
  double normalizer = 0;
  std::vector<double> doubling;  // log2 of the charge ratio between consecutive full iterations
};

double log_term(double v) { return std::max(1.0, std::log2(v)); }

CorpusRun corpus_run(const std::string& family, const Instance& inst) {
  constexpr double kDelta = 0.1;
  CorpusRun out;
  out.family = family;
  const auto tree = make_problem_tree(inst);
  const double truth = exhaustive_optimum(inst);

  QueryLedger classical_ledger;
  const BnbResult classical = classical_bnb(*tree, HeuristicKind::kCostBased, 0, classical_ledger);
  const auto classical_value = tree->leaf_value(classical.leaf);
  out.classical_ok = classical_value && std::abs(*classical_value - truth) <= 1e-6 * std::max(1.0, std::abs(truth));
  out.q = classical.trace.q();

  SolverParams params;
  params.delta = kDelta;
  QueryLedger ledger;
  const IqbbResult r = run_iqbb(*tree, params, ledger);
  const auto value = tree->leaf_value(r.leaf);
  out.value_ok = value && std::abs(*value - truth) <= 1e-6 * std::max(1.0, std::abs(truth));
  out.charged = ledger.charged_quantum;

  // optimum in cost units: the exhaustive optimum is attained by the classical leaf
  const Cost optimum = classical.cost;
  for (const IterationRecord& rec : r.iterations) {
    if (rec.incumbent) out.bracket_ok &= rec.best_bound <= optimum && optimum <= *rec.incumbent;
  }

  // the closing iteration stops early, so it is left out
  for (std::size_t i = 2; i + 1 < r.iterations.size(); ++i) {
    out.doubling.push_back(std::log2(r.iterations[i].charge / r.iterations[i - 1].charge));
  }

  const TreeBounds b = tree->bounds();
  const LocalReduction local = reduce_to_local(make_heuristic(HeuristicKind::kCostBased, b), *tree);
  const Hcost h_max = total_order(local.hcost, b.depth).h_max();
  const double log_t = log_term(static_cast<double>(b.size));
  const double ll = log_term(log_t / kDelta);
  out.normalizer = std::max(1, b.depth) * log_term(static_cast<double>(b.c_max) * static_cast<double>(h_max)) * ll * ll;
  out.ratio = out.charged / (std::sqrt(static_cast<double>(out.q)) * out.normalizer);
  return out;
}

std::vector<CorpusRun> run_corpus() {
  struct Job {
    std::string family;
    ProblemKind kind;
    int n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int n : {4, 6, 8, 10, 12, 14}) {
    for (std::uint64_t s = 0; s < 50; ++s) jobs.push_back({"sk", ProblemKind::kSk, n, s});
  }
  for (int n : {6, 8, 10, 12, 14, 16}) {
    for (std::uint64_t s = 0; s < 50; ++s) jobs.push_back({"mis", ProblemKind::kMis, n, s});
  }
  for (int n : {3, 4, 5, 6}) {
    for (std::uint64_t s = 0; s < 20; ++s) jobs.push_back({"portfolio", ProblemKind::kPortfolio, n, s});
  }
  std::vector<CorpusRun> runs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      runs[i] = corpus_run(jobs[i].family, gen_instance(jobs[i].kind, jobs[i].n, jobs[i].seed));
    }
  };
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  return runs;
}

// Slope of log y on log x after removing each family's mean (family fixed effects).
double within_family_slope(const std::vector<CorpusRun>& runs, const std::function<double(const CorpusRun&)>& y) {
  std::map<std::string, std::pair<double, double>> mean;
  std::map<std::string, int> count;
  for (const CorpusRun& r : runs) {
    mean[r.family].first += std::log(static_cast<double>(r.q));
    mean[r.family].second += std::log(y(r));
    ++count[r.family];
  }
  double sxx = 0, sxy = 0;
  for (const CorpusRun& r : runs) {
    const double mx = mean[r.family].first / count[r.family];
    const double my = mean[r.family].second / count[r.family];
    const double dx = std::log(static_cast<double>(r.q)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y(r)) - my);
  }
  return sxy / sxx;
}

void criteria_corpus() {
  const auto t0 = Clock::now();
  const std::vector<CorpusRun> runs = run_corpus();
  const double secs = seconds_since(t0);
  std::map<std::string, std::pair<int, int>> by_family;  // agree, total
  int value_ok = 0, classical_ok = 0, bracket_ok = 0;
  double max_ratio = 0;
  bool finite = true;
  for (const CorpusRun& r : runs) {
    value_ok += r.value_ok;
    classical_ok += r.classical_ok;
    bracket_ok += r.bracket_ok;
    by_family[r.family].first += r.value_ok && r.classical_ok;
    ++by_family[r.family].second;
    finite &= std::isfinite(r.ratio) && r.ratio > 0;
    max_ratio = std::max(max_ratio, r.ratio);
  }
  const int total = static_cast<int>(runs.size());
  std::string detail;
  for (const auto& [family, c] : by_family) {
    detail += family + " " + std::to_string(c.first) + "/" + std::to_string(c.second) + ", ";
  }
  verdict(4, value_ok == total && classical_ok == total,
          detail + "iqbb " + std::to_string(value_ok) + "/" + std::to_string(total) + ", classical " +
              std::to_string(classical_ok) + "/" + std::to_string(total) + " equal the exhaustive optimum (" +
              fmt("%.1f", secs) + " s)");

  const double normalized = within_family_slope(runs, [](const CorpusRun& r) { return r.charged / r.normalizer; });
  const double raw = within_family_slope(runs, [](const CorpusRun& r) { return r.charged; });
  std::string per_family;
  for (const auto& [family, c] : by_family) {
    std::vector<CorpusRun> one;
    for (const CorpusRun& r : runs) {
      if (r.family == family) one.push_back(r);
    }
    per_family += ", " + family + " " +
                  fmt("%.3f", within_family_slope(one, [](const CorpusRun& r) { return r.charged / r.normalizer; }));
  }
  std::vector<double> doubling;
  for (const CorpusRun& r : runs) doubling.insert(doubling.end(), r.doubling.begin(), r.doubling.end());
  verdict(5, finite && std::abs(normalized - 0.5) <= 0.1,
          "max budget ratio " + fmt("%.4g", max_ratio) + " (finite: " + (finite ? "yes" : "no") +
              "); within-family slope of log(charged / (d log(c_max h_max) log^2(log T/delta))) on log Q " +
              fmt("%.3f", normalized) + " (target 0.5 +/- 0.1), raw charged slope " + fmt("%.3f", raw) +
              "; per family" + per_family + "; median per-doubling charge exponent within a run " +
              fmt("%.3f", median(doubling)));

  verdict(6, bracket_ok == total,
          std::to_string(bracket_ok) + "/" + std::to_string(total) +
              " runs where every iteration with an incumbent satisfies best-bound <= optimum <= incumbent");
}

// ---- criteria 7, 8: SK scaling sweep ----

void criteria_scaling() {
  ExperimentConfig c;
  c.kind = ProblemKind::kSk;
  c.n_min = 10;
  c.n_max = 22;
  c.n_step = 2;
  c.seeds = 30;
  c.solver = SolverKind::kClassical;
  c.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto t0 = Clock::now();
  int failed = 0;
  const auto records = run_experiment(c, {}, [&](const ExperimentFailure&) { ++failed; });
  const double secs = seconds_since(t0);
  const ScalingFit fit = fit_scaling(records);
  verdict(7, fit.r2 >= 0.9 && failed == 0 && secs <= 1800,
          std::to_string(records.size()) + " records, alpha " + fmt("%.4f", fit.alpha) + ", r^2 " +
              fmt("%.4f", fit.r2) + ", projected quantum exponent " + fmt("%.4f", fit.projected_quantum()) +
              " (reference SK 0.494 -> 0.247), " + fmt("%.1f", secs) + " s");
  const Report rep = make_report(records);
  std::string ratios;
  for (const DepthRow& row : rep.depth) ratios += " " + std::to_string(row.n) + ":" + fmt("%.4f", row.max_ratio);
  const bool pass8 = rep.depth_trend && *rep.depth_trend <= 0;
  verdict(8, pass8,
          "Spearman of max d_max/n^2 against n " + (rep.depth_trend ? fmt("%.3f", *rep.depth_trend) : "n/a") +
              ";" + ratios);
}

// ---- criterion 9: branch and cut ----

bool same_run(const IqbbResult& a, const QueryLedger& la, const IqbbResult& b, const QueryLedger& lb) {
  if (!(a.leaf == b.leaf) || a.cost != b.cost || a.final_m != b.final_m || a.capped != b.capped) return false;
  if (a.iterations.size() != b.iterations.size() || la.charged_quantum != lb.charged_quantum) return false;
  for (std::size_t i = 0; i < a.iterations.size(); ++i) {
    const IterationRecord& x = a.iterations[i];
    const IterationRecord& y = b.iterations[i];
    if (x.m != y.m || x.certificate_nodes != y.certificate_nodes || x.bound1 != y.bound1 || x.bound2 != y.bound2 ||
        x.best_bound != y.best_bound || x.incumbent != y.incumbent || x.charge != y.charge) {
      return false;
    }
  }
  return la.charge_breakdown.size() == lb.charge_breakdown.size();
}

// Every iteration but the last books exactly p cut searches inside its own charge.
bool p_factor_booked(const IqbbResult& r, const QueryLedger& ledger, int p, double cut_delta) {
  std::size_t e = 0;
  double cumulative = 0;
  double target = 0;
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    target += r.iterations[i].charge;
    int searches = 0;
    while (e < ledger.charge_breakdown.size() && cumulative < target * (1 - 1e-12)) {
      const ChargeEntry& entry = ledger.charge_breakdown[e++];
      cumulative += entry.charge;
      searches += entry.primitive == Primitive::kTreeSearch && entry.delta == cut_delta;
    }
    const int want = i + 1 < r.iterations.size() ? p : 0;
    if (searches != want) return false;
  }
  return e == ledger.charge_breakdown.size();
}

void criterion_branch_and_cut() {
  constexpr int kInstances = 20;
  int identical = 0;
  int exact = 0;
  int booked = 0;
  int with_cuts = 0;
  for (int i = 0; i < kInstances; ++i) {
    const int n = 5 + i % 5;
    const MisInstance g = gen_mis(n, 500 + static_cast<std::uint64_t>(i));
    const int truth = mis_exhaustive(g);

    MisCutFamily none(g, 0);
    const SolverParams params;
    QueryLedger plain_ledger;
    const IqbbResult plain = run_iqbb(none.tree({}), params, plain_ledger);
    QueryLedger zero_ledger;
    const IqbbResult zero = run_iqbc(none.tree({}), none.config(), params, zero_ledger);
    identical += same_run(plain, plain_ledger, zero, zero_ledger);

    const int p = 2 + i % 2;
    MisCutFamily family(g, p);
    QueryLedger ledger;
    const IqbbResult cut = run_iqbc(family.tree({}), family.config(), params, ledger);
    const auto value = family.tree(cut.cuts).leaf_value(cut.leaf);
    exact += value && *value == truth;
    with_cuts += !cut.cuts.empty();
    const SolverSetup setup = solver_setup(family.tree({}), params);
    booked += p_factor_booked(cut, ledger, p, params.delta / (5.0 * p * setup.log_t));
  }
  verdict(9, identical == kInstances && exact == kInstances && booked == kInstances,
          "p=0 bit-identical to iqbb " + std::to_string(identical) + "/" + std::to_string(kInstances) +
              "; with triangle cuts exhaustive optimum " + std::to_string(exact) + "/" + std::to_string(kInstances) +
              " (" + std::to_string(with_cuts) + " applied cuts); p cut searches booked per iteration " +
              std::to_string(booked) + "/" + std::to_string(kInstances));
}

}  // namespace

int main() {
  criteria_subtree();
  criterion_primitives();
  criteria_corpus();
  criteria_scaling();
  criterion_branch_and_cut();
  return failures == 0 ? 0 : 1;
}
