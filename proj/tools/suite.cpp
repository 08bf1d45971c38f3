#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "pdtlab/circuits.hpp"
#include "pdtlab/coset.hpp"
#include "pdtlab/ledger.hpp"
#include "pdtlab/solver.hpp"
#include "pdtlab/spectral.hpp"
#include "pdtlab/strategies.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/trees.hpp"

namespace pdtlab::cli {

namespace {

using Rng = std::mt19937_64;

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed, std::ostream& out)
      : name_(std::move(name)), rng(seed ^ fnv1a(name_)), out_(out) {}

  // The digest covers case descriptions only, so equal seeds give equal digests
  // whatever the outcome.
  void check(const std::string& desc, bool ok, const std::string& detail = {}) {
    ++cases_;
    digest_ = (digest_ ^ fnv1a(desc)) * 1099511628211ULL;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) out_ << "  FAIL " << name_ << " [" << desc << "] " << detail << "\n";
  }

  int finish() {
    std::ostringstream hex;
    hex << std::hex << digest_;
    out_ << "suite " << name_ << ": " << cases_ << " cases, " << failures_ << " failures, digest " << hex.str() << "\n";
    return failures_;
  }

  int rand_n(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::string name_;

 public:
  Rng rng;

 private:
  std::ostream& out_;
  int cases_ = 0;
  int failures_ = 0;
  std::uint64_t digest_ = 14695981039346656037ULL;
};

oracle::Table table(const BooleanFunction& f) {
  return oracle::table_of(f.num_vars(), [&f](std::uint64_t x) { return f(x); });
}

std::string fn_desc(const BooleanFunction& f) { return "n=" + std::to_string(f.num_vars()) + " tt=" + std::to_string(fnv1a(write_pdttt(f))); }

std::int32_t leaf_of(const ParityDecisionTree& t, Assignment x) {
  std::int32_t id = t.root();
  while (!t.node(id).is_leaf()) id = t.node(id).child[t.node(id).query.apply(x)];
  return id;
}

// The refutation must name a real defect of t, checked without trusting the
// adversary's path.
bool refutation_holds(const BooleanFunction& f, const ParityDecisionTree& t, const Refutation& r) {
  if (!r.applicable) return false;
  if (r.first == r.second) return eval_tree(t, r.first) != f(r.first);
  return leaf_of(t, r.first) == leaf_of(t, r.second) && f(r.first) != f(r.second);
}

int suite_core(const SuiteOptions& opt, std::ostream& out) {
  Suite s("core", opt.seed, out);
  for (int i = 0; i < opt.cases; ++i) {
    const int n = s.rand_n(1, opt.max_n);
    const auto f = random_function(n, s.rng());
    const auto desc = fn_desc(f);
    s.check("pdttt " + desc, read_pdttt(write_pdttt(f)) == f);

    const auto c = testing_support::random_coset(s.rng, n, s.rand_n(0, n));
    bool ok = true;
    std::uint64_t points = 0;
    c.for_each_point([&](Assignment x) {
      ok = ok && c.contains(x);
      ++points;
      return true;
    });
    if (!c.empty()) {
      ok = ok && points == (std::uint64_t{1} << c.dim());
      const auto r = restrict(f, c);
      for (Assignment t = 0; t < r.g.table_size(); ++t) ok = ok && r.g(t) == f(r.param.lift(t));
    }
    s.check("coset " + desc + " rank=" + std::to_string(c.rank()), ok);
  }
  for (int n = 1; n <= std::min(opt.max_n, 12); ++n) {
    const auto m = majority(n);
    bool ok = true;
    for (Assignment x = 0; x < m.table_size(); ++x) ok = ok && (m(x) == -1) == (2 * std::popcount(x) >= n);
    s.check("maj predicate n=" + std::to_string(n), ok);
  }
  return s.finish();
}

int suite_spectral(const SuiteOptions& opt, std::ostream& out) {
  Suite s("spectral", opt.seed, out);
  for (int i = 0; i < opt.cases; ++i) {
    const int n = s.rand_n(1, std::max(opt.max_n, 2));
    const auto f = random_function(n, s.rng());
    const auto desc = fn_desc(f);
    const auto sp = wht(f);
    std::int64_t energy = 0;
    for (auto c : sp.coeffs) energy += c * c;
    s.check("parseval " + desc, energy == std::int64_t{1} << (2 * n));
    s.check("roundtrip " + desc, inverse_wht(sp) == f);

    const int gran = granularity(sp);
    const auto spar = sparsity(sp);
    const int d2 = deg2(f);
    bool chain = sparsity_lower_bound(spar) <= gran;
    if (!f.is_constant()) chain = chain && d2 <= gran + 1;
    if (spar >= 2) chain = chain && gran <= std::log2(static_cast<double>(spar)) - 1 + 1e-9;
    s.check("chain " + desc, chain, "gran=" + std::to_string(gran) + " spar=" + std::to_string(spar));

    if (n >= 2) {
      const auto s0 = wht(restrict(f, ParityMask::variable(n), 0).g);
      const auto s1 = wht(restrict(f, ParityMask::variable(n), 1).g);
      const std::uint64_t top = std::uint64_t{1} << (n - 1);
      bool ok = true;
      for (std::uint64_t m = 0; m < top; ++m) ok = ok && 2 * s0[m] == sp[m] + sp[m | top] && 2 * s1[m] == sp[m] - sp[m | top];
      s.check("subfunctions " + desc, ok);
    }
    if (n <= 7) {
      const auto t = table(f);
      s.check("oracle " + desc, gran == oracle::granularity(t, n) && spar == oracle::sparsity(t) && d2 == oracle::deg2(t));
    }
  }
  return s.finish();
}

int suite_pdt(const SuiteOptions& opt, std::ostream& out) {
  Suite s("pdt", opt.seed, out);
  for (int i = 0; i < opt.cases; ++i) {
    const int n = s.rand_n(1, opt.max_n);
    const auto t = testing_support::random_tree(s.rng, n, s.rand_n(1, 5));
    const bool own = s.rng() & 1;
    const auto f = own ? BooleanFunction::from_predicate(n, [&t](Assignment x) { return eval_tree(t, x) == -1; })
                       : random_function(n, s.rng());
    const auto desc = fn_desc(f) + " tree=" + std::to_string(fnv1a(write_tree(t)));
    const auto ex = verify_tree(t, f, VerifyMode::Exhaustive);
    const auto lw = verify_tree(t, f, VerifyMode::LeafWise);
    bool ok = ex.pass == lw.pass && (!own || ex.pass);
    if (!lw.pass) ok = ok && lw.witness && eval_tree(t, *lw.witness) != f(*lw.witness);
    s.check("verify " + desc, ok);
    s.check("text " + desc, read_tree(write_tree(t), n) == t);

    const auto strat = tree_strategy(t);
    bool runs = true;
    for (int k = 0; k < 8; ++k) {
      const Assignment x = s.rng() & ParityMask::all(n).bits;
      const auto r = run_strategy(*strat, x);
      runs = runs && r.output == eval_tree(t, x) && r.queries <= t.depth();
    }
    s.check("run " + desc, runs);
  }
  return s.finish();
}

int suite_solver(const SuiteOptions& opt, std::ostream& out) {
  Suite s("solver", opt.seed, out);
  const int top = std::min(opt.max_n, 4);
  for (int i = 0; i < opt.cases; ++i) {
    const int n = s.rand_n(1, top);
    const auto f = random_function(n, s.rng());
    const auto desc = fn_desc(f);
    const auto t = table(f);
    SolveOptions so;
    so.threads = opt.threads;
    const auto r = exact_depth(f, so);
    const int naive = oracle::naive_depth(t, n);
    bool ok = r.exact && r.depth == naive && r.depth >= r.bounds.best_lower && r.witness &&
              r.witness->depth() == r.depth && verify_tree(*r.witness, f).pass;
    s.check("exact " + desc, ok, "solver=" + std::to_string(r.depth) + " naive=" + std::to_string(naive));

    if (n <= 3) {
      const auto c = parity_certificate(f);
      s.check("certificate " + desc, c.exact && c.value == oracle::naive_certificate(t, n) && c.value <= r.depth);
    }

    if (!f.is_constant() && r.witness) {
      const int gran = r.bounds.gran;
      auto cuts = testing_support::truncations(*r.witness, gran);
      std::shuffle(cuts.begin(), cuts.end(), s.rng);
      if (cuts.size() > 16) cuts.resize(16);
      bool all = true;
      for (const auto& cut : cuts) all = all && refutation_holds(f, cut, adversary_refute(f, cut));
      s.check("refute " + desc, all);
    }
  }
  if (opt.exhaustive_functions) {
    for (int n = 1; n <= std::min(opt.max_n, 3); ++n) {
      const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << n);
      for (std::uint64_t w = 0; w < tables; ++w) {
        const BooleanFunction f(n, {w});
        const auto r = exact_depth(f);
        s.check("all n=" + std::to_string(n) + " tt=" + std::to_string(w), r.exact && r.depth == oracle::naive_depth(table(f), n));
      }
    }
  }
  return s.finish();
}

int suite_strategies(const SuiteOptions& opt, std::ostream& out) {
  Suite s("strategies", opt.seed, out);
  const auto thr_point = [](int k) { return [k](Assignment x) { return std::popcount(x) >= k ? -1 : 1; }; };
  for (int n = 1; n <= std::min(opt.max_n + 4, 14); ++n) {
    const auto rep = simulate_all(*maj_strategy(n), [n](Assignment x) { return 2 * std::popcount(x) >= n ? -1 : 1; }, opt.threads);
    s.check("maj n=" + std::to_string(n), rep.correct && rep.worst_case == n - ones_in_binary(n) + 1);
  }
  for (int n = 3; n <= std::min(opt.max_n + 3, 11); n += 2) {
    const auto rep = simulate_all(*thr2_strategy(n), thr_point(2), opt.threads);
    s.check("thr2 n=" + std::to_string(n), rep.correct && rep.worst_case == n - 1);
  }
  for (int i = 0; i < opt.cases / 4; ++i) {
    const int n = s.rand_n(1, std::min(opt.max_n, 6));
    const int k = s.rand_n(0, n + 1);
    const auto f = threshold(n + 2, k + 1);
    if (f.is_constant()) continue;
    const auto t = testing_support::random_correct_tree(f, s.rng, s.rand_n(1, 3));
    const auto desc = "reduce n=" + std::to_string(n) + " k=" + std::to_string(k) + " tree=" + std::to_string(fnv1a(write_tree(t)));
    const auto rep = simulate_all(*thr_reduce(t, n, k), thr_point(k));
    s.check(desc, rep.correct && rep.worst_case <= t.depth() - 1);
  }
  return s.finish();
}

int suite_circuits(const SuiteOptions& opt, std::ostream& out) {
  Suite s("circuits", opt.seed, out);
  for (int i = 0; i < opt.cases; ++i) {
    const int n = s.rand_n(1, std::min(opt.max_n, 8));
    const int ands = s.rand_n(0, 6);
    const auto text = testing_support::random_netlist(s.rng, n, ands, s.rand_n(0, 7));
    const auto c = parse_circuit(text);
    bool ok = c.truth_table() == parse_circuit(write_circuit(c)).truth_table();
    for (auto choice : {AndInputChoice::SmallerMask, AndInputChoice::Left, AndInputChoice::Right}) {
      const auto rep = simulate_all(*circuit_to_strategy(c, choice), [&c](Assignment x) { return c.eval(x); });
      ok = ok && rep.correct && rep.worst_case <= and_count(c) + 1 && !rep.dependent_query;
    }
    s.check("netlist " + std::to_string(fnv1a(text)), ok);
  }
  return s.finish();
}

int suite_ledger(const SuiteOptions& opt, std::ostream& out) {
  Suite s("ledger", opt.seed, out);
  for (int i = 0; i < std::max(1, opt.cases / 10); ++i) {
    const int n = s.rand_n(1, std::min(opt.max_n, 6));
    const auto f = random_function(n, s.rng());
    const auto desc = fn_desc(f);
    auto a = measures_record(f, desc);
    const auto b = measures_record(f, desc);
    a["kind"] = "measures";
    a["timestamp"] = "1970-01-01T00:00:00Z";
    a["tool_version"] = kToolVersion;
    std::string why;
    s.check("record " + desc, a.at("spar") == b.at("spar") && a.at("gran") == b.at("gran") && a.at("bounds") == b.at("bounds") &&
                                  valid_ledger_entry(a, &why),
            why);
  }
  return s.finish();
}

}  // namespace

int run_suites(const SuiteOptions& opt, std::ostream& out) {
  if (opt.max_n < 1 || opt.max_n > 16) throw Error("--max-n must be in [1, 16]");
  out << "seed " << opt.seed << ", cases " << opt.cases << ", max-n " << opt.max_n << "\n";
  int failures = 0;
  failures += suite_core(opt, out);
  failures += suite_spectral(opt, out);
  failures += suite_pdt(opt, out);
  failures += suite_solver(opt, out);
  failures += suite_strategies(opt, out);
  failures += suite_circuits(opt, out);
  failures += suite_ledger(opt, out);
  return failures;
}

}  // namespace pdtlab::cli
