#include "iqbb/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "iqbb/errors.hpp"

namespace iqbb {

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "sk") return ProblemKind::kSk;
  if (name == "mis") return ProblemKind::kMis;
  if (name == "portfolio") return ProblemKind::kPortfolio;
  throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

std::string_view problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kSk: return "sk";
    case ProblemKind::kMis: return "mis";
    case ProblemKind::kPortfolio: return "portfolio";
  }
  return "?";
}

ProblemKind kind_of(const Instance& inst) {
  return static_cast<ProblemKind>(inst.index());
}

int size_of(const Instance& inst) {
  return std::visit([](const auto& i) { return i.n; }, inst);
}

namespace {

void require_size(int n) {
  if (n < 2) throw InstanceError("instance size must be at least 2");
}

}  // namespace

SkInstance gen_sk(int n, std::uint64_t seed) {
  require_size(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SkInstance inst{n, seed, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = normal(rng);
      inst.coupling[static_cast<std::size_t>(a) * n + b] = v;
      inst.coupling[static_cast<std::size_t>(b) * n + a] = v;
    }
  }
  return inst;
}

MisInstance gen_mis(int n, std::uint64_t seed, double edge_probability) {
  require_size(n);
  if (!(edge_probability >= 0 && edge_probability <= 1)) {
    throw InstanceError("edge probability must lie in [0,1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_probability);
  MisInstance inst{n, seed, edge_probability, {}};
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (coin(rng)) inst.edges.emplace_back(a, b);
    }
  }
  return inst;
}

PortfolioInstance gen_portfolio(int n, std::uint64_t seed) {
  require_size(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ret(0.5, 1.5);
  std::uniform_real_distribution<double> price(1.0, 2.0);
  std::normal_distribution<double> factor(0.0, 0.5 / std::sqrt(static_cast<double>(n)));
  PortfolioInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.cardinality = std::max(1, n / 2);
  inst.cap_fraction = std::max(0.1, 3.0 / n);
  inst.mu.resize(n);
  inst.prices.resize(n);
  for (int i = 0; i < n; ++i) inst.mu[i] = ret(rng);
  for (int i = 0; i < n; ++i) inst.prices[i] = price(rng);
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  for (double& v : g) v = factor(rng);
  inst.sigma.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += g[static_cast<std::size_t>(k) * n + i] * g[static_cast<std::size_t>(k) * n + j];
      inst.sigma[static_cast<std::size_t>(i) * n + j] = s;
    }
  }
  // plant a feasible holding and derive the budget from it
  std::uniform_int_distribution<int> lots(1, 3);
  std::uniform_real_distribution<double> last_lot(1.0, 3.0);
  std::vector<int> order(n - 1);
  std::iota(order.begin(), order.end(), 0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> spend;
    for (int k = 0; k + 1 < inst.cardinality; ++k) spend.push_back(inst.prices[order[k]] * lots(rng));
    spend.push_back(inst.prices[n - 1] * last_lot(rng));
    inst.budget = std::accumulate(spend.begin(), spend.end(), 0.0);
    const double top = *std::max_element(spend.begin(), spend.end());
    if (top <= inst.cap_fraction * inst.budget) return inst;
  }
  throw InstanceError("portfolio generation found no feasible budget");
}

Instance gen_instance(ProblemKind kind, int n, std::uint64_t seed) {
  switch (kind) {
    case ProblemKind::kSk: return gen_sk(n, seed);
    case ProblemKind::kMis: return gen_mis(n, seed);
    case ProblemKind::kPortfolio: return gen_portfolio(n, seed);
  }
  throw InstanceError("unknown problem kind");
}

namespace {

void write_row(std::ostream& out, const double* v, int count) {
  for (int i = 0; i < count; ++i) out << (i ? " " : "") << v[i];
  out << '\n';
}

void write_matrix(std::ostream& out, const std::vector<double>& m, int n) {
  for (int i = 0; i < n; ++i) write_row(out, m.data() + static_cast<std::size_t>(i) * n, n);
}

// Whitespace token reader that skips '#' comment lines.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] == '#') continue;
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) tokens_.push_back(t);
    }
  }

  std::string word() {
    if (pos_ >= tokens_.size()) throw FormatError("instance file ends early");
    return tokens_[pos_++];
  }
  void expect(std::string_view key) {
    const std::string w = word();
    if (w != key) throw FormatError("instance file: expected '" + std::string(key) + "', got '" + w + "'");
  }
  template <typename T>
  T number() {
    const std::string w = word();
    std::istringstream ss(w);
    T v{};
    if (!(ss >> v) || !ss.eof()) throw FormatError("instance file: bad number '" + w + "'");
    return v;
  }
  std::vector<double> numbers(std::size_t count) {
    std::vector<double> v(count);
    for (double& x : v) x = number<double>();
    return v;
  }
  bool done() const { return pos_ == tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_instance(std::ostream& out, const Instance& inst) {
  const auto old = out.precision(17);
  out << "# iqbb instance\n";
  out << "kind " << problem_kind_name(kind_of(inst)) << '\n';
  out << "n " << size_of(inst) << '\n';
  std::visit([&](const auto& i) { out << "seed " << i.seed << '\n'; }, inst);
  if (const auto* sk = std::get_if<SkInstance>(&inst)) {
    out << "coupling\n";
    write_matrix(out, sk->coupling, sk->n);
  } else if (const auto* mis = std::get_if<MisInstance>(&inst)) {
    out << "edge_probability " << mis->edge_probability << '\n';
    out << "edges " << mis->edges.size() << '\n';
    for (const auto& [a, b] : mis->edges) out << a << ' ' << b << '\n';
  } else {
    const auto& p = std::get<PortfolioInstance>(inst);
    out << "budget " << p.budget << '\n';
    out << "risk " << p.risk << '\n';
    out << "cardinality " << p.cardinality << '\n';
    out << "cap_fraction " << p.cap_fraction << '\n';
    out << "mu ";
    write_row(out, p.mu.data(), p.n);
    out << "prices ";
    write_row(out, p.prices.data(), p.n);
    out << "sigma\n";
    write_matrix(out, p.sigma, p.n);
  }
  out.precision(old);
}

Instance read_instance(std::istream& in) {
  Tokens tk(in);
  tk.expect("kind");
  ProblemKind kind;
  try {
    kind = parse_problem_kind(tk.word());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  tk.expect("n");
  const int n = tk.number<int>();
  if (n < 2 || n > 4096) throw FormatError("instance file: n out of range");
  tk.expect("seed");
  const auto seed = tk.number<std::uint64_t>();
  const auto nn = static_cast<std::size_t>(n) * n;
  Instance out;
  if (kind == ProblemKind::kSk) {
    tk.expect("coupling");
    SkInstance sk{n, seed, tk.numbers(nn)};
    for (int a = 0; a < n; ++a) {
      if (sk.j(a, a) != 0) throw FormatError("instance file: coupling diagonal must be zero");
      for (int b = 0; b < a; ++b) {
        if (sk.j(a, b) != sk.j(b, a)) throw FormatError("instance file: coupling must be symmetric");
      }
    }
    out = std::move(sk);
  } else if (kind == ProblemKind::kMis) {
    MisInstance mis{n, seed, 0.8, {}};
    tk.expect("edge_probability");
    mis.edge_probability = tk.number<double>();
    tk.expect("edges");
    const auto m = tk.number<std::size_t>();
    for (std::size_t e = 0; e < m; ++e) {
      const int a = tk.number<int>();
      const int b = tk.number<int>();
      if (a < 0 || b >= n || a >= b) throw FormatError("instance file: edge endpoints must satisfy 0 <= a < b < n");
      mis.edges.emplace_back(a, b);
    }
    std::vector<std::pair<int, int>> sorted = mis.edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw FormatError("instance file: repeated edge");
    }
    out = std::move(mis);
  } else {
    PortfolioInstance p;
    p.n = n;
    p.seed = seed;
    tk.expect("budget");
    p.budget = tk.number<double>();
    tk.expect("risk");
    p.risk = tk.number<double>();
    tk.expect("cardinality");
    p.cardinality = tk.number<int>();
    tk.expect("cap_fraction");
    p.cap_fraction = tk.number<double>();
    tk.expect("mu");
    p.mu = tk.numbers(n);
    tk.expect("prices");
    p.prices = tk.numbers(n);
    tk.expect("sigma");
    p.sigma = tk.numbers(nn);
    if (p.budget <= 0 || p.cardinality < 1 || p.cardinality > n || p.cap_fraction <= 0) {
      throw FormatError("instance file: portfolio parameters out of range");
    }
    for (double v : p.prices) {
      if (v <= 0) throw FormatError("instance file: prices must be positive");
    }
    out = std::move(p);
  }
  if (!tk.done()) throw FormatError("instance file: trailing data");
  return out;
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  write_instance(out, inst);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  return read_instance(in);
}

}  // namespace iqbb
