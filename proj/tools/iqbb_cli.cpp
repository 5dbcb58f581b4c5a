#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "iqbb/bench.hpp"
#include "iqbb/classical_search.hpp"
#include "iqbb/errors.hpp"
#include "iqbb/incremental_solvers.hpp"
#include "iqbb/problems.hpp"
#include "iqbb/subtree_gen.hpp"
#include "iqbb/tree_io.hpp"

using namespace iqbb;

namespace {

constexpr int kUsageError = 1;
constexpr int kSolveError = 2;

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct SolveOptions {
  std::string instance;
  std::string heuristic = "cost";
  Cost eps = 0;
  double delta = 0.1;
  std::string mode = "exact";
  std::string charge_polylog = "on";
  int p = 1;
};

void add_solve_options(CLI::App& cmd, SolveOptions& o, bool quantum) {
  cmd.add_option("--instance", o.instance, "instance file")->required();
  cmd.add_option("--heuristic", o.heuristic, "cost, dfs, astar");
  cmd.add_option("--eps", o.eps, "absolute gap tolerance in cost units");
  if (quantum) {
    cmd.add_option("--delta", o.delta, "failure probability in (0,1)");
    cmd.add_option("--estimator,--mode", o.mode, "exact or adversarial:<seed>");
    cmd.add_option("--charge-polylog", o.charge_polylog, "on or off")
        ->check(CLI::IsMember({"on", "off"}));
  }
}

SolverParams solver_params(const SolveOptions& o) {
  SolverParams params;
  params.heuristic = parse_heuristic(o.heuristic);
  params.eps = o.eps;
  params.delta = o.delta;
  params.mode = EstimatorMode::parse(o.mode);
  params.policy.include_polylog = o.charge_polylog == "on";
  if (!(params.delta > 0 && params.delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
  return params;
}

void print_value(const ProblemTree& tree, const NodeId& leaf, Cost cost) {
  const auto value = tree.leaf_value(leaf);
  if (!value) throw InstanceError("no feasible leaf");
  std::cout << "value=" << exact(*value) << '\n';
  std::cout << "cost=" << cost << '\n';
  std::cout << "leaf=" << leaf.to_string() << '\n';
}

void print_quantum(const IqbbResult& r, const QueryLedger& ledger) {
  std::cout << "charged_quantum=" << exact(ledger.charged_quantum) << '\n';
  std::cout << "final_m=" << r.final_m << '\n';
  std::cout << "iterations=" << r.iterations.size() << '\n';
  std::cout << "capped=" << (r.capped ? "true" : "false") << '\n';
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed, const std::string& out) {
  const Instance inst = gen_instance(parse_problem_kind(kind), n, seed);
  if (out.empty() || out == "-") {
    write_instance(std::cout, inst);
  } else {
    save_instance(out, inst);
  }
  return 0;
}

int cmd_classical(const SolveOptions& o) {
  const HeuristicKind heuristic = parse_heuristic(o.heuristic);
  const auto tree = make_problem_tree(load_instance(o.instance));
  QueryLedger ledger;
  const BnbResult r = classical_bnb(*tree, heuristic, o.eps, ledger);
  print_value(*tree, r.leaf, r.cost);
  std::cout << "Q=" << r.trace.q() << '\n';
  std::cout << "d_max=" << r.trace.d_max_seen << '\n';
  return 0;
}

int cmd_iqbb(const SolveOptions& o) {
  const SolverParams params = solver_params(o);
  const auto tree = make_problem_tree(load_instance(o.instance));
  QueryLedger ledger;
  const IqbbResult r = run_iqbb(*tree, params, ledger);
  print_value(*tree, r.leaf, r.cost);
  print_quantum(r, ledger);
  return 0;
}

int cmd_iqbc(const SolveOptions& o) {
  const SolverParams params = solver_params(o);
  if (o.p < 0) throw std::invalid_argument("p must be nonnegative");
  const Instance inst = load_instance(o.instance);
  QueryLedger ledger;
  if (const auto* mis = std::get_if<MisInstance>(&inst)) {
    MisCutFamily family(*mis, o.p);
    const IqbbResult r = run_iqbc(family.tree({}), family.config(), params, ledger);
    print_value(family.tree(r.cuts), r.leaf, r.cost);
    print_quantum(r, ledger);
    std::cout << "cuts=" << r.cuts.size() << '\n';
    return 0;
  }
  // no cut family for this kind: the searches run and find nothing
  const auto tree = make_problem_tree(inst);
  CutConfig cuts;
  cuts.p = o.p;
  cuts.cp = [](const NodeId&, const std::vector<int>&) { return std::optional<int>{}; };
  cuts.apply = [&](const std::vector<int>&) -> const TreeOracle& { return *tree; };
  const IqbbResult r = run_iqbc(*tree, cuts, params, ledger);
  print_value(*tree, r.leaf, r.cost);
  print_quantum(r, ledger);
  std::cout << "cuts=0\n";
  return 0;
}

int cmd_subtree_check(const std::string& path, int m, const std::string& mode_text, double delta) {
  if (m < 0) throw std::invalid_argument("m must be nonnegative");
  const EstimatorMode mode = EstimatorMode::parse(mode_text);
  const ExplicitTree tree = load_tree(path);
  const LocalHcost hc = total_order(tree.stored_hcost(), tree.bounds().depth);
  const ExplorationTrace full = full_trace(tree, hc);
  QueryLedger ledger;
  QuantumEmulator emu(ledger, {}, mode);
  const SubtreeCertificate cert = qsubtree_local(tree, hc, m, delta, emu);
  const CertificateTree view(tree, hc, cert);
  const CertificateReport rep = verify_certificate(view, full, m);
  std::cout << m << ',' << (rep.contains_first ? "true" : "false") << ',' << rep.node_count << ','
            << cert.node_bound() << ',' << exact(rep.valid_fraction) << ',' << exact(ledger.charged_quantum)
            << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, int jobs, const std::string& out_override) {
  ExperimentConfig config = load_config(config_path);
  if (jobs > 0) config.jobs = jobs;
  if (!out_override.empty()) config.out = out_override;
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!config.out.empty() && config.out != "-") {
    file.open(config.out);
    if (!file) throw FormatError("cannot write " + config.out);
    out = &file;
  }
  write_csv_header(*out);
  int failures = 0;
  run_experiment(
      config,
      [&](const ExperimentRecord& r) {
        write_csv_row(*out, r);
        out->flush();
      },
      [&](const ExperimentFailure& f) {
        ++failures;
        std::cerr << "n=" << f.n << " seed=" << f.seed << ": " << f.message << '\n';
      });
  return failures ? kSolveError : 0;
}

int cmd_fit(const std::string& csv) {
  const auto records = load_csv(csv);
  ScalingFit fit;
  try {
    fit = fit_scaling(records);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());  // too little data is not a usage error
  }
  std::cout << "alpha," << exact(fit.alpha) << '\n';
  std::cout << "projected_quantum_alpha," << exact(fit.projected_quantum()) << '\n';
  std::cout << "intercept," << exact(fit.intercept) << '\n';
  std::cout << "r2," << exact(fit.r2) << '\n';
  std::cout << "n_range," << fit.n_min << '-' << fit.n_max << '\n';
  std::cout << "n,median_Q,mean_Q\n";
  for (const auto& [n, med] : fit.medians) std::cout << n << ',' << exact(med) << ',' << exact(fit.means.at(n)) << '\n';
  return 0;
}

int cmd_report(const std::string& csv) {
  print_report(std::cout, make_report(load_csv(csv)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch and bound with emulated quantum tree search"};
  app.require_subcommand(1);

  std::string kind;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  auto* gen = app.add_subcommand("gen", "generate a problem instance");
  gen->add_option("--kind", kind, "sk, mis or portfolio")->required();
  gen->add_option("--n", n, "instance size")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out, "output file, '-' for stdout");

  SolveOptions classical_opts;
  auto* classical = app.add_subcommand("solve-classical", "best-first branch and bound");
  add_solve_options(*classical, classical_opts, false);
  SolveOptions iqbb_opts;
  auto* iqbb_cmd = app.add_subcommand("solve-iqbb", "incremental quantum branch and bound");
  add_solve_options(*iqbb_cmd, iqbb_opts, true);
  SolveOptions iqbc_opts;
  auto* iqbc_cmd = app.add_subcommand("solve-iqbc", "incremental quantum branch and cut");
  add_solve_options(*iqbc_cmd, iqbc_opts, true);
  iqbc_cmd->add_option("--p", iqbc_opts.p, "cut searches per iteration");

  std::string tree_path;
  int m = 0;
  std::string mode = "exact";
  double delta = 0.1;
  auto* subtree = app.add_subcommand("subtree-check", "verify one subtree certificate; prints "
                                                      "m,contains_first,node_count,node_bound,"
                                                      "valid_fraction,charged_quantum");
  subtree->add_option("--tree", tree_path, "tree file")->required();
  subtree->add_option("--m", m, "log2 of the number of nodes to cover")->required();
  subtree->add_option("--mode", mode, "exact or adversarial:<seed>");
  subtree->add_option("--delta", delta, "failure probability");

  std::string config_path;
  int jobs = 0;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "run an experiment sweep and write CSV");
  bench->add_option("--config", config_path, "key-value config file")->required();
  bench->add_option("--jobs", jobs, "concurrent instances, overrides the config");
  bench->add_option("--out", bench_out, "CSV path, overrides the config");

  std::string csv;
  auto* fit = app.add_subcommand("fit", "exponential fit of median Q against n");
  fit->add_option("csv", csv, "experiment CSV")->required();
  auto* report = app.add_subcommand("report", "depth ratio and spread tables");
  report->add_option("csv", csv, "experiment CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) return cmd_gen(kind, n, seed, out);
    if (*classical) return cmd_classical(classical_opts);
    if (*iqbb_cmd) return cmd_iqbb(iqbb_opts);
    if (*iqbc_cmd) return cmd_iqbc(iqbc_opts);
    if (*subtree) return cmd_subtree_check(tree_path, m, mode, delta);
    if (*bench) return cmd_bench(config_path, jobs, bench_out);
    if (*fit) return cmd_fit(csv);
    if (*report) return cmd_report(csv);
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolveError;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolveError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolveError;
  }
  return kUsageError;
}
