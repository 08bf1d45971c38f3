#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pdtlab/circuits.hpp"
#include "pdtlab/ledger.hpp"
#include "pdtlab/solver.hpp"
#include "pdtlab/spectral.hpp"
#include "pdtlab/strategies.hpp"
#include "suite.hpp"

using namespace pdtlab;

namespace {

struct Source {
  std::string fn;
  std::string file;

  void add_to(CLI::App* cmd) {
    auto* a = cmd->add_option("--fn", fn, "named function, e.g. maj:7, thr:10,3, rmaj:2, ip:6");
    auto* b = cmd->add_option("--file", file, "PDTTT truth-table file");
    a->excludes(b);
  }

  std::pair<BooleanFunction, std::string> load() const {
    if (!fn.empty()) {
      const auto named = parse_named(fn);
      return {build_named(named), named.id()};
    }
    if (file.empty()) throw Error("one of --fn or --file is required");
    const std::string text = read_file(file);
    std::ostringstream id;
    id << "tt:" << std::hex << fnv1a(text);
    return {read_pdttt(text), id.str()};
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("cannot write " + path);
}

std::string format_path(const std::vector<QueryStep>& path) {
  std::string out;
  for (const auto& s : path) out += " " + std::to_string(s.query.bits) + "=" + std::to_string(s.answer);
  return out.empty() ? " (root)" : out;
}

std::int32_t leaf_of(const ParityDecisionTree& t, Assignment x) {
  std::int32_t id = t.root();
  while (!t.node(id).is_leaf()) id = t.node(id).child[t.node(id).query.apply(x)];
  return id;
}

int cmd_measures(const Source& src, bool show_anf, const std::string& spectrum_out, bool cert, const std::string& ledger) {
  const auto [f, id] = src.load();
  const auto s = wht(f);
  const auto b = bound_profile(f, cert);
  std::cout << "function " << id << "\n"
            << "n " << f.num_vars() << "\n"
            << "spar " << b.spar << "\n"
            << "gran " << b.gran << "\n"
            << "deg2 " << b.deg2 << "\n";
  if (b.cert_bound) std::cout << "cert " << *b.cert_bound << "\n";
  std::cout << "bounds sparsity " << b.sparsity_bound << " deg2 " << b.deg2_bound << " gran " << b.gran_bound;
  if (b.cert_bound) std::cout << " cert " << *b.cert_bound;
  std::cout << " best_lower " << b.best_lower << "\n";
  // D(f) <= c_and(f) + 1 and D(f) >= gran(f) + 1.
  if (!f.is_constant()) std::cout << "c_and >= " << b.gran << "\n";
  if (show_anf) std::cout << "anf " << format_anf(anf(f)) << "\n";
  if (!spectrum_out.empty()) write_text(spectrum_out, export_spectrum(s));
  const auto path = resolve_ledger_path(ledger);
  if (!path.empty()) append_ledger(path, "measures", measures_record(f, id, cert));
  return 0;
}

struct SolveArgs {
  double budget_seconds = 0;
  int threads = 1;
  std::uint64_t node_budget = 0;
  std::string emit_tree;
  std::string ledger;
  int expect = -1;
  bool cert = false;
};

int cmd_solve(const Source& src, const SolveArgs& a) {
  const auto [f, id] = src.load();
  SolveOptions opt;
  opt.time_budget = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(a.budget_seconds * 1000)));
  opt.threads = a.threads;
  opt.node_budget = a.node_budget;
  auto r = exact_depth(f, opt);
  if (a.cert) r.bounds.cert_bound = parity_certificate(f).value;
  std::cout << solve_report_json(r, f.num_vars(), id) << "\n";
  if (!a.emit_tree.empty() && r.witness) write_text(a.emit_tree, write_tree(*r.witness));
  const auto path = resolve_ledger_path(a.ledger);
  if (!path.empty()) {
    auto e = measures_record(f, id, a.cert);
    add_solve_fields(e, r);
    append_ledger(path, "solve", std::move(e));
  }
  if (a.expect >= 0 && !(r.exact && r.depth == a.expect)) {
    std::cerr << "expected exact depth " << a.expect << "\n";
    return 1;
  }
  return 0;
}

struct StrategyArgs {
  std::string name;
  int n = 0;
  int k = 0;
  std::string verify = "exhaustive";
  std::string emit_tree;
  int threads = 1;
  std::string ledger;
};

int cmd_strategy(const StrategyArgs& a) {
  std::unique_ptr<Strategy> s;
  PointFunction f;
  int expected = 0;
  std::string id;
  if (a.name == "maj") {
    const int n = a.n;
    s = maj_strategy(n);
    f = [n](Assignment x) { return 2 * std::popcount(x) >= n ? -1 : 1; };
    expected = n - ones_in_binary(n) + 1;
    id = "maj:" + std::to_string(n);
  } else if (a.name == "rmaj") {
    const int k = a.k;
    s = rmaj_strategy(k);
    f = [k](Assignment x) { return recursive_majority_value(k, x); };
    expected = (s->num_vars() + 1) / 2;
    id = "rmaj:" + std::to_string(k);
  } else if (a.name == "thr2" || a.name == "thr3") {
    const int t = a.name == "thr2" ? 2 : 3;
    s = t == 2 ? thr2_strategy(a.n) : thr3_strategy(a.n);
    f = [t](Assignment x) { return std::popcount(x) >= t ? -1 : 1; };
    expected = a.n - 1;
    id = "thr:" + std::to_string(a.n) + "," + std::to_string(t);
  } else {
    throw Error("unknown strategy '" + a.name + "'");
  }

  bool correct = false;
  int worst = 0;
  std::optional<Assignment> witness;
  std::optional<ParityDecisionTree> tree;
  if (a.verify == "exhaustive") {
    const auto rep = simulate_all(*s, f, a.threads);
    correct = rep.correct;
    worst = rep.worst_case;
    witness = rep.witness;
  } else if (a.verify == "leafwise") {
    tree = materialize(*s);
    const auto rep = verify_tree(*tree, s->num_vars(), f, VerifyMode::LeafWise);
    correct = rep.pass;
    worst = tree->depth();
    witness = rep.witness;
  } else {
    throw Error("--verify must be exhaustive or leafwise");
  }
  if (!a.emit_tree.empty()) {
    if (!tree) tree = materialize(*s);
    write_text(a.emit_tree, write_tree(*tree));
  }
  std::cout << "strategy " << s->name() << "\n"
            << "function " << id << "\n"
            << "n " << s->num_vars() << "\n"
            << "verify " << a.verify << "\n"
            << "correct " << (correct ? "yes" : "no") << "\n"
            << "worst_case " << worst << "\n"
            << "bound " << expected << "\n";
  if (witness) std::cout << "counterexample " << *witness << "\n";
  const auto path = resolve_ledger_path(a.ledger);
  if (!path.empty()) {
    Json e;
    e["function_id"] = id;
    e["n"] = s->num_vars();
    e["strategy"] = {{"name", s->name()}, {"verify", a.verify}, {"correct", correct}, {"worst_case", worst}};
    append_ledger(path, "strategy", std::move(e));
  }
  return correct && worst <= expected ? 0 : 1;
}

int cmd_refute(const Source& src, const std::string& tree_path) {
  const auto [f, id] = src.load();
  const auto t = load_tree(tree_path, f.num_vars());
  const auto r = adversary_refute(f, t);
  const int gran = granularity(wht(f));
  std::cout << "function " << id << "\n"
            << "tree_depth " << t.depth() << "\n"
            << "gran " << gran << "\n";
  if (!r.applicable) {
    std::cout << "refutation none (tree depth exceeds gran or f is constant)\n";
    return 1;
  }
  bool holds;
  if (r.first == r.second) holds = eval_tree(t, r.first) != f(r.first);
  else holds = leaf_of(t, r.first) == leaf_of(t, r.second) && f(r.first) != f(r.second);
  std::cout << "character " << r.character << "\n"
            << "path" << format_path(r.path) << "\n"
            << "leaf_label " << r.leaf_label << "\n";
  if (r.first == r.second) std::cout << "wrong_at " << r.first << " f=" << f(r.first) << "\n";
  else std::cout << "same_leaf " << r.first << " f=" << f(r.first) << " and " << r.second << " f=" << f(r.second) << "\n";
  std::cout << "rechecked " << (holds ? "yes" : "no") << "\n";
  return holds ? 0 : 1;
}

int cmd_reduce(const std::string& tree_path, int n, int k, const std::string& emit_tree) {
  const auto t = load_tree(tree_path, n + 2);
  const auto s = thr_reduce(t, n, k);
  const auto rep = simulate_all(*s, [k](Assignment x) { return std::popcount(x) >= k ? -1 : 1; });
  if (!emit_tree.empty()) write_text(emit_tree, write_tree(materialize(*s)));
  std::cout << "input_tree_depth " << t.depth() << "\n"
            << "target thr:" << n << "," << k << "\n"
            << "correct " << (rep.correct ? "yes" : "no") << "\n"
            << "worst_case " << rep.worst_case << "\n"
            << "bound " << t.depth() - 1 << "\n";
  return rep.correct && rep.worst_case <= t.depth() - 1 ? 0 : 1;
}

int cmd_circuit(const std::string& file, bool to_pdt, const std::string& choice_name, const std::string& emit_tree) {
  const auto c = load_circuit(file);
  AndInputChoice choice = AndInputChoice::SmallerMask;
  if (choice_name == "left") choice = AndInputChoice::Left;
  else if (choice_name == "right") choice = AndInputChoice::Right;
  else if (choice_name != "smaller") throw Error("--choice must be smaller, left or right");
  std::cout << "n " << c.n << "\n"
            << "and_count " << and_count(c) << "\n";
  if (!to_pdt && emit_tree.empty()) return 0;
  const auto s = circuit_to_strategy(c, choice);
  const auto rep = simulate_all(*s, [&c](Assignment x) { return c.eval(x); });
  if (!emit_tree.empty()) write_text(emit_tree, write_tree(materialize(*s)));
  std::cout << "correct " << (rep.correct ? "yes" : "no") << "\n"
            << "worst_case " << rep.worst_case << "\n"
            << "bound " << and_count(c) + 1 << "\n";
  return rep.correct && rep.worst_case <= and_count(c) + 1 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity decision tree laboratory"};
  app.require_subcommand(1);

  auto* measures = app.add_subcommand("measures", "spectral measures and lower-bound profile");
  Source m_src;
  m_src.add_to(measures);
  bool m_anf = false;
  bool m_cert = false;
  std::string m_spectrum;
  std::string m_ledger;
  measures->add_flag("--anf", m_anf, "print the algebraic normal form");
  measures->add_flag("--cert", m_cert, "also compute the parity certificate complexity");
  measures->add_option("--spectrum-out", m_spectrum, "write nonzero Fourier coefficients, one 'mask<TAB>value' per line");
  measures->add_option("--ledger", m_ledger, "append a JSON line here (default $PDTLAB_LEDGER)");

  auto* solve = app.add_subcommand("solve", "exact parity decision tree depth");
  Source s_src;
  s_src.add_to(solve);
  SolveArgs s_args;
  solve->add_option("--budget-seconds", s_args.budget_seconds, "wall-clock budget; 0 is unlimited");
  solve->add_option("--threads", s_args.threads)->check(CLI::Range(1, 256));
  solve->add_option("--node-budget", s_args.node_budget, "node budget; 0 is unlimited");
  solve->add_option("--emit-tree", s_args.emit_tree, "write the witness tree");
  solve->add_option("--ledger", s_args.ledger);
  solve->add_option("--expect", s_args.expect, "exit 1 unless the exact depth equals this");
  solve->add_flag("--cert", s_args.cert, "include the parity certificate bound");

  auto* strategy = app.add_subcommand("strategy", "verify a query strategy");
  StrategyArgs st;
  strategy->add_option("--name", st.name)->required()->check(CLI::IsMember({"maj", "rmaj", "thr2", "thr3"}));
  strategy->add_option("--n", st.n, "variables (maj, thr2, thr3)");
  strategy->add_option("--k", st.k, "recursion depth (rmaj)");
  strategy->add_option("--verify", st.verify)->check(CLI::IsMember({"exhaustive", "leafwise"}));
  strategy->add_option("--emit-tree", st.emit_tree);
  strategy->add_option("--threads", st.threads)->check(CLI::Range(1, 256));
  strategy->add_option("--ledger", st.ledger);

  auto* refute = app.add_subcommand("refute", "adversary refutation of a shallow tree");
  Source r_src;
  r_src.add_to(refute);
  std::string r_tree;
  refute->add_option("--tree", r_tree)->required();

  auto* reduce = app.add_subcommand("reduce-thr", "turn a THR(n+2,k+1) tree into a THR(n,k) strategy");
  std::string rd_tree;
  std::string rd_emit;
  int rd_n = 0;
  int rd_k = 0;
  reduce->add_option("--tree", rd_tree)->required();
  reduce->add_option("--n", rd_n)->required();
  reduce->add_option("--k", rd_k)->required();
  reduce->add_option("--emit-tree", rd_emit);

  auto* circuit = app.add_subcommand("circuit", "XOR-AND netlist to parity decision tree");
  std::string c_file;
  std::string c_choice = "smaller";
  std::string c_emit;
  bool c_to_pdt = false;
  circuit->add_option("--file", c_file)->required();
  circuit->add_flag("--to-pdt", c_to_pdt, "build and verify the query strategy");
  circuit->add_option("--choice", c_choice, "AND input to query: smaller, left or right");
  circuit->add_option("--emit-tree", c_emit);

  auto* suite = app.add_subcommand("suite", "seeded property suites across all modules");
  cli::SuiteOptions so;
  suite->add_option("--seed", so.seed, "default 1729");
  suite->add_option("--cases", so.cases)->check(CLI::Range(1, 1000000));
  suite->add_option("--max-n", so.max_n)->check(CLI::Range(1, 16));
  suite->add_flag("--exhaustive-functions", so.exhaustive_functions, "every function on up to min(max-n, 3) variables vs the naive solver");
  suite->add_option("--threads", so.threads)->check(CLI::Range(1, 256));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*measures) return cmd_measures(m_src, m_anf, m_spectrum, m_cert, m_ledger);
    if (*solve) return cmd_solve(s_src, s_args);
    if (*strategy) return cmd_strategy(st);
    if (*refute) return cmd_refute(r_src, r_tree);
    if (*reduce) return cmd_reduce(rd_tree, rd_n, rd_k, rd_emit);
    if (*circuit) return cmd_circuit(c_file, c_to_pdt, c_choice, c_emit);
    if (*suite) return cli::run_suites(so, std::cout) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
