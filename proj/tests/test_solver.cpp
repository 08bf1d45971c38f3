#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "pdtlab/coset.hpp"
#include "pdtlab/solver.hpp"
#include "pdtlab/spectral.hpp"
#include "pdtlab/strategies.hpp"
#include "support/oracles.hpp"
#include "support/trees.hpp"

using namespace pdtlab;

namespace {

oracle::Table table(const BooleanFunction& f) {
  return oracle::table_of(f.num_vars(), [&f](std::uint64_t x) { return f(x); });
}

BooleanFunction named(const std::string& s) { return build_named(parse_named(s)); }

int solve(const BooleanFunction& f, SolveOptions opt = {}) {
  const auto r = exact_depth(f, opt);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.witness);
  if (r.witness) {
    EXPECT_TRUE(verify_tree(*r.witness, f).pass);
    EXPECT_EQ(r.witness->depth(), r.depth);
  }
  return r.depth;
}

}  // namespace

TEST(ExactDepth, Examples) {
  EXPECT_EQ(solve(majority(3)), 2);
  EXPECT_EQ(solve(named("and:3")), 3);
  EXPECT_EQ(solve(threshold(5, 2)), 4);
  EXPECT_EQ(solve(BooleanFunction::constant(4, 1)), 0);
  EXPECT_EQ(solve(BooleanFunction::constant(4, -1)), 0);
  EXPECT_EQ(solve(named("rmaj:1")), 2);
}

TEST(ExactDepth, AtLeastEveryBound) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto f = random_function(n, rng());
    const auto r = exact_depth(f);
    const auto b = bound_profile(f, true);
    ASSERT_TRUE(r.exact);
    ASSERT_GE(r.depth, b.sparsity_bound);
    ASSERT_GE(r.depth, b.deg2_bound);
    ASSERT_GE(r.depth, b.gran_bound);
    ASSERT_GE(r.depth, *b.cert_bound);
  }
}

TEST(ExactDepth, GranBoundTightOnFamilies) {
  std::vector<BooleanFunction> fs;
  for (int n = 1; n <= 7; ++n) fs.push_back(majority(n));
  for (int n = 1; n <= 6; ++n) {
    fs.push_back(named("parity:" + std::to_string(n)));
    fs.push_back(named("and:" + std::to_string(n)));
  }
  fs.push_back(named("rmaj:1"));
  for (const auto& f : fs) EXPECT_EQ(solve(f), bound_profile(f).gran_bound);
}

TEST(ExactDepth, RestrictionNeverHarder) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto f = random_function(n, rng());
    Coset c(n);
    const int k = 1 + static_cast<int>(rng() % (n - 1));
    for (int i = 0; i < k; ++i) c = c.with(ParityMask{rng() & ParityMask::all(n).bits}, rng() & 1);
    if (c.empty()) continue;
    ASSERT_LE(solve(restrict(f, c).g), solve(f));
  }
}

TEST(ExactDepth, MemoAndBoundsDoNotChangeTheAnswer) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto f = random_function(n, rng());
    SolveOptions plain;
    plain.memoize = false;
    SolveOptions nobounds;
    nobounds.use_bounds = false;
    nobounds.memoize = false;
    const int d = solve(f);
    ASSERT_EQ(solve(f, plain), d);
    ASSERT_EQ(solve(f, nobounds), d);
  }
}

TEST(ExactDepth, MatchesNaiveMinimax) {
  for (std::uint64_t t = 0; t < 16; ++t) {
    const BooleanFunction f(2, {t});
    ASSERT_EQ(solve(f), oracle::naive_depth(table(f), 2));
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_function(4, rng());
    ASSERT_EQ(solve(f), oracle::naive_depth(table(f), 4));
  }
}

TEST(ExactDepth, BudgetGivesCertifiedInterval) {
  // Small random functions close on the static bound alone; THR(11,4) needs a
  // few dozen nodes to lift gran+1 = 8 to the true depth.
  const auto f = threshold(11, 4);
  const auto full = exact_depth(f);
  ASSERT_TRUE(full.exact);
  EXPECT_GT(full.nodes_expanded, 5U);

  SolveOptions tight;
  tight.node_budget = 5;
  const auto r = exact_depth(f, tight);
  ASSERT_FALSE(r.exact);
  EXPECT_GE(r.lower, full.bounds.best_lower);
  EXPECT_LE(r.lower, full.depth);
  EXPECT_GE(r.upper, full.depth);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(verify_tree(*r.witness, f).pass);
  EXPECT_EQ(r.witness->depth(), r.upper);
}

TEST(ExactDepth, Thr103ClosesAtTheRoot) {
  // Every first query leaves a child of granularity >= 7, so one node proves depth 9.
  const int n = 10;
  const auto t = oracle::table_of(n, [](std::uint64_t x) { return std::popcount(x) >= 3 ? -1 : 1; });
  for (std::uint64_t q = 1; q < (std::uint64_t{1} << n); ++q) {
    int worst = 0;
    for (int b = 0; b < 2; ++b) {
      // Restrict by eliminating the lowest variable of q.
      const int v = std::countr_zero(q);
      const auto sub = oracle::table_of(n - 1, [&](std::uint64_t y) {
        const std::uint64_t lo = y & ((std::uint64_t{1} << v) - 1);
        std::uint64_t x = lo | ((y >> v) << (v + 1));
        if ((std::popcount(x & q) & 1) != b) x |= std::uint64_t{1} << v;
        return t[x];
      });
      worst = std::max(worst, oracle::granularity(sub, n - 1));
    }
    ASSERT_GE(worst, 7) << q;
  }
  const auto r = exact_depth(threshold(10, 3));
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.depth, 9);
}

TEST(ExactDepth, ThreadsAgree) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = random_function(5, rng());
    SolveOptions par;
    par.threads = 3;
    ASSERT_EQ(solve(f, par), solve(f));
  }
}

TEST(ExactDepth, IncumbentClosesSearch) {
  const auto f = majority(7);
  SolveOptions opt;
  opt.incumbent = materialize(*maj_strategy(7));
  const auto r = exact_depth(f, opt);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.depth, 5);
  EXPECT_EQ(r.nodes_expanded, 0U);

  SolveOptions wrong;
  wrong.incumbent = ParityDecisionTree::leaf(7, 1);
  EXPECT_THROW(exact_depth(f, wrong), Error);
}

TEST(ExactDepth, ThresholdGap) {
  // Lower bounds stay at 8 while the true depth is 9.
  const auto b = bound_profile(threshold(10, 3));
  EXPECT_EQ(b.gran_bound, 8);
  EXPECT_LT(b.best_lower, 9);
}

TEST(BoundProfile, Examples) {
  const auto m5 = bound_profile(majority(5));
  EXPECT_EQ(m5.gran_bound, 4);
  EXPECT_EQ(m5.sparsity_bound, 2);
  EXPECT_EQ(m5.deg2_bound, 4);
  EXPECT_EQ(m5.best_lower, 4);
  EXPECT_FALSE(m5.cert_bound);
  for (int n = 1; n <= 8; ++n) {
    const auto p = named("parity:" + std::to_string(n));
    EXPECT_EQ(bound_profile(p).gran_bound, 1);
    EXPECT_EQ(solve(p), 1);
  }
  EXPECT_EQ(bound_profile(BooleanFunction::constant(3, 1)).gran_bound, 0);
}

TEST(Adversary, RefutesEveryDepthOneTreeForMaj3) {
  const auto f = majority(3);
  for (std::uint64_t q = 1; q < 8; ++q) {
    for (int l0 : {-1, 1}) {
      for (int l1 : {-1, 1}) {
        const auto t = ParityDecisionTree::query(ParityMask{q}, ParityDecisionTree::leaf(3, l0), ParityDecisionTree::leaf(3, l1));
        const auto r = adversary_refute(f, t);
        ASSERT_TRUE(r.applicable);
        // Re-check: the points follow the reported path and expose an error.
        for (auto x : {r.first, r.second}) {
          for (const auto& step : r.path) ASSERT_EQ(step.query.apply(x), step.answer);
          ASSERT_EQ(eval_tree(t, x), r.leaf_label);
        }
        if (r.first == r.second) ASSERT_NE(f(r.first), r.leaf_label);
        else ASSERT_NE(f(r.first), f(r.second));
      }
    }
  }
}

TEST(Adversary, NotApplicableToDeepTrees) {
  const auto f = majority(3);
  const auto t = *exact_depth(f).witness;
  EXPECT_FALSE(adversary_refute(f, t).applicable);
  EXPECT_FALSE(adversary_refute(BooleanFunction::constant(3, 1), ParityDecisionTree::leaf(3, 1)).applicable);
}

TEST(Adversary, RefutesTruncationsOfMaj5) {
  const auto f = majority(5);
  const int gran = granularity(wht(f));
  ASSERT_EQ(gran, 3);
  const auto trees = testing_support::truncations(*exact_depth(f).witness, gran);
  ASSERT_FALSE(trees.empty());
  for (const auto& t : trees) {
    const auto r = adversary_refute(f, t);
    ASSERT_TRUE(r.applicable);
    ASSERT_FALSE(verify_tree(t, f).pass);
    if (r.first == r.second) ASSERT_NE(f(r.first), eval_tree(t, r.first));
    else ASSERT_NE(f(r.first), f(r.second));
    ASSERT_EQ(eval_tree(t, r.first), eval_tree(t, r.second));
  }
}

TEST(Adversary, UsesSmallestGranularityCharacter) {
  const auto r = adversary_refute(majority(3), ParityDecisionTree::leaf(3, 1));
  ASSERT_TRUE(r.applicable);
  EXPECT_EQ(r.character, 1U);
  EXPECT_TRUE(r.path.empty());
}

TEST(Certificate, Examples) {
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(parity_certificate(named("and:" + std::to_string(n))).value, n);
    EXPECT_EQ(parity_certificate(named("parity:" + std::to_string(n))).value, 1);
  }
  EXPECT_EQ(parity_certificate(majority(3)).value, 2);
  EXPECT_EQ(parity_certificate(BooleanFunction::constant(3, -1)).value, 0);
}

TEST(Certificate, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto f = random_function(n, rng());
    const auto c = parity_certificate(f);
    const auto t = table(f);
    ASSERT_TRUE(c.exact);
    ASSERT_EQ(c.value, oracle::naive_certificate(t, n));
    for (Assignment x = 0; x < f.table_size(); ++x) ASSERT_EQ(c.per_x_lower[x], oracle::naive_certificate_at(t, n, x));
  }
  // Symmetric shortcut agrees with the brute force too.
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= n + 1; ++k) ASSERT_EQ(parity_certificate(threshold(n, k)).value, oracle::naive_certificate(table(threshold(n, k)), n));
}

TEST(Certificate, BudgetGivesInterval) {
  const auto f = random_function(8, 1);
  const auto full = parity_certificate(f);
  const auto cut = parity_certificate(f, 1);
  EXPECT_FALSE(cut.exact);
  for (Assignment x = 0; x < f.table_size(); ++x) {
    ASSERT_LE(cut.per_x_lower[x], full.per_x_lower[x]);
    ASSERT_GE(cut.per_x_upper[x], full.per_x_upper[x]);
  }
}

TEST(Json, StableFields) {
  const auto f = majority(5);
  const auto r = exact_depth(f);
  const auto j = nlohmann::json::parse(solve_report_json(r, 5, "maj:5"));
  EXPECT_EQ(j["n"], 5);
  EXPECT_EQ(j["function_id"], "maj:5");
  EXPECT_EQ(j["exact_depth"], 4);
  EXPECT_FALSE(j.contains("interval"));
  EXPECT_EQ(j["bounds"]["gran"], 4);
  EXPECT_EQ(j["bounds"]["deg2"], 4);
  EXPECT_EQ(j["bounds"]["spar"], 2);
  EXPECT_TRUE(j["bounds"]["cert"].is_null());
  EXPECT_TRUE(j.contains("nodes_expanded"));
  EXPECT_TRUE(j.contains("memo_hits"));
  EXPECT_TRUE(j.contains("wall_ms"));
}

TEST(Trees, GreedyAndVariableTreesAreCorrect) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const auto f = random_function(n, rng());
    ASSERT_TRUE(verify_tree(greedy_tree(f), f).pass);
    const auto v = variable_tree(f);
    ASSERT_TRUE(verify_tree(v, f).pass);
    ASSERT_LE(v.depth(), n);
  }
}
