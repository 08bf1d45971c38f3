#include <gtest/gtest.h>

#include <random>

#include "pdtlab/pdt.hpp"
#include "pdtlab/solver.hpp"
#include "pdtlab/strategies.hpp"
#include "support/generators.hpp"

using namespace pdtlab;

namespace {

// Always outputs the same value.
class ConstantStrategy final : public Strategy {
  struct Session final : StrategySession {
    Action next() const override { return Output{-1}; }
    void answer(int) override {}
    std::unique_ptr<StrategySession> clone() const override { return std::make_unique<Session>(*this); }
  };

 public:
  int num_vars() const override { return 3; }
  int budget() const override { return 0; }
  std::string name() const override { return "const"; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<Session>(); }
};

// Asks x1 twice, then outputs x1.
class RepeatStrategy final : public Strategy {
  struct Session final : StrategySession {
    int asked = 0;
    int last = 0;
    Action next() const override {
      if (asked < 2) return Query{ParityMask::variable(1)};
      return Output{last ? -1 : 1};
    }
    void answer(int bit) override {
      ++asked;
      last = bit;
    }
    std::unique_ptr<StrategySession> clone() const override { return std::make_unique<Session>(*this); }
  };

 public:
  int num_vars() const override { return 2; }
  int budget() const override { return 2; }
  std::string name() const override { return "repeat"; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<Session>(); }
};

// Queries forever.
class RunawayStrategy final : public Strategy {
  struct Session final : StrategySession {
    int asked = 0;
    Action next() const override { return Query{ParityMask::variable(1 + asked % 2)}; }
    void answer(int) override { ++asked; }
    std::unique_ptr<StrategySession> clone() const override { return std::make_unique<Session>(*this); }
  };

 public:
  int num_vars() const override { return 2; }
  int budget() const override { return 3; }
  std::string name() const override { return "runaway"; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<Session>(); }
};

}  // namespace

TEST(Tree, EvalExamples) {
  const auto leaf = ParityDecisionTree::leaf(4, -1);
  for (Assignment x = 0; x < 16; ++x) EXPECT_EQ(eval_tree(leaf, x), -1);
  EXPECT_EQ(leaf.depth(), 0);

  const auto dictator = ParityDecisionTree::query(ParityMask::variable(1), ParityDecisionTree::leaf(1, 1),
                                                  ParityDecisionTree::leaf(1, -1));
  EXPECT_EQ(eval_tree(dictator, 0), 1);
  EXPECT_EQ(eval_tree(dictator, 1), -1);
  EXPECT_EQ(dictator.depth(), 1);
  EXPECT_EQ(dictator.leaf_count(), 2U);

  const auto opt = exact_depth(majority(3));
  ASSERT_TRUE(opt.witness);
  for (Assignment x = 0; x < 8; ++x) EXPECT_EQ(eval_tree(*opt.witness, x), majority(3)(x));
}

TEST(Tree, RejectsZeroQuery) {
  auto t = ParityDecisionTree::empty_arena(2);
  const auto a = t.add_leaf(1);
  const auto b = t.add_leaf(-1);
  EXPECT_THROW(t.add_query(ParityMask{}, a, b), Error);
}

TEST(Verify, Examples) {
  const auto f = threshold(5, 2);
  const auto opt = exact_depth(f);
  ASSERT_TRUE(opt.witness);
  EXPECT_TRUE(verify_tree(*opt.witness, f).pass);

  // Flip one leaf of the MAJ3 tree.
  const auto good = *exact_depth(majority(3)).witness;
  std::int32_t target = -1;
  for (std::size_t i = 0; i < good.nodes().size(); ++i)
    if (good.nodes()[i].is_leaf()) target = static_cast<std::int32_t>(i);
  auto bad = ParityDecisionTree::empty_arena(3);
  std::function<std::int32_t(std::int32_t)> copy = [&](std::int32_t id) -> std::int32_t {
    const auto& nd = good.node(id);
    if (nd.is_leaf()) return bad.add_leaf(id == target ? -nd.label : nd.label);
    const auto z = copy(nd.child[0]);
    const auto o = copy(nd.child[1]);
    return bad.add_query(nd.query, z, o);
  };
  bad.set_root(copy(good.root()));
  for (auto mode : {VerifyMode::Exhaustive, VerifyMode::LeafWise}) {
    const auto rep = verify_tree(bad, 3, [](Assignment x) { return majority(3)(x); }, mode);
    ASSERT_FALSE(rep.pass);
    ASSERT_TRUE(rep.witness);
    EXPECT_NE(eval_tree(bad, *rep.witness), majority(3)(*rep.witness));
  }
}

TEST(Verify, ModesAgreeOnRandomTrees) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto t = testing_support::random_tree(rng, n, 1 + static_cast<int>(rng() % 5));
    // Half the time the target is the tree's own function.
    const BooleanFunction f = rng() & 1 ? BooleanFunction::from_predicate(n, [&t](Assignment x) { return eval_tree(t, x) == -1; })
                                        : random_function(n, rng());
    const auto ex = verify_tree(t, f, VerifyMode::Exhaustive);
    const auto lw = verify_tree(t, f, VerifyMode::LeafWise);
    ASSERT_EQ(ex.pass, lw.pass);
    if (!lw.pass) ASSERT_NE(eval_tree(t, *lw.witness), f(*lw.witness));
  }
}

TEST(Verify, LeafWiseCountsInfeasibleLeaves) {
  // x1, then x1 again: the (0,1) and (1,0) leaves are unreachable.
  const auto inner0 = ParityDecisionTree::query(ParityMask::variable(1), ParityDecisionTree::leaf(2, 1), ParityDecisionTree::leaf(2, -1));
  const auto t = ParityDecisionTree::query(ParityMask::variable(1), inner0, inner0);
  const auto rep = verify_tree(t, BooleanFunction::from_predicate(2, [](Assignment x) { return x & 1; }), VerifyMode::LeafWise);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.infeasible_leaves, 2U);
}

TEST(TreeText, RoundTrip) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto t = testing_support::random_tree(rng, n, 4);
    ASSERT_EQ(read_tree(write_tree(t), n), t);
  }
  const auto t = read_tree("(q 3\n  (0 (leaf 1))\n  (1 (leaf -1)))", 2);
  EXPECT_EQ(t.depth(), 1);
  EXPECT_EQ(write_tree(t), "(q 3 (0 (leaf 1)) (1 (leaf -1)))\n");
}

TEST(TreeText, RejectsMalformed) {
  EXPECT_THROW(read_tree("(q 0 (0 (leaf 1)) (1 (leaf -1)))", 2), ParseError);
  EXPECT_THROW(read_tree("(q 4 (0 (leaf 1)) (1 (leaf -1)))", 2), ParseError);
  EXPECT_THROW(read_tree("(leaf 2)", 2), ParseError);
  EXPECT_THROW(read_tree("(q 1 (1 (leaf 1)) (0 (leaf -1)))", 2), ParseError);
  EXPECT_THROW(read_tree("(leaf 1) extra", 2), ParseError);
  EXPECT_THROW(read_tree("(q 1 (0 (leaf 1))", 2), ParseError);
}

TEST(Run, Examples) {
  const auto maj = maj_strategy(3);
  auto r = run_strategy(*maj, 0b011);
  EXPECT_EQ(r.output, -1);
  EXPECT_LE(r.queries, 2);

  const auto thr = thr2_strategy(5);
  r = run_strategy(*thr, 0);
  EXPECT_EQ(r.output, 1);
  EXPECT_LE(r.queries, 4);

  const auto rm = rmaj_strategy(1);
  for (Assignment x = 0; x < 8; ++x) {
    r = run_strategy(*rm, x);
    EXPECT_EQ(r.output, majority(3)(x));
    EXPECT_LE(r.queries, 2);
    EXPECT_EQ(static_cast<int>(r.transcript.size()), r.queries);
  }
}

TEST(Run, BudgetExceeded) { EXPECT_THROW(run_strategy(RunawayStrategy{}, 0), BudgetExceeded); }

TEST(Materialize, Examples) {
  EXPECT_EQ(materialize(*maj_strategy(4)).depth(), 4);
  EXPECT_EQ(materialize(*maj_strategy(3)).depth(), 2);
  const auto c = materialize(ConstantStrategy{});
  EXPECT_EQ(c.depth(), 0);
  EXPECT_EQ(c.leaf_count(), 1U);
  EXPECT_THROW(materialize(RunawayStrategy{}), BudgetExceeded);
}

TEST(Materialize, DependentQueryEmitsNoNode) {
  const auto t = materialize(RepeatStrategy{});
  EXPECT_EQ(t.depth(), 1);
  const auto sim = simulate_all(RepeatStrategy{}, [](Assignment x) { return x & 1 ? -1 : 1; });
  EXPECT_TRUE(sim.correct);
  EXPECT_TRUE(sim.dependent_query);
  EXPECT_EQ(sim.worst_case, 2);  // charged even though redundant
}

TEST(Materialize, DepthEqualsWorstCaseRun) {
  std::vector<std::unique_ptr<Strategy>> all;
  for (int n = 1; n <= 12; ++n) all.push_back(maj_strategy(n));
  for (int n = 3; n <= 11; n += 2) all.push_back(thr2_strategy(n));
  all.push_back(thr3_strategy(6));
  all.push_back(thr3_strategy(10));
  all.push_back(rmaj_strategy(2));
  for (const auto& s : all) {
    const auto t = materialize(*s);
    int worst = 0;
    for (Assignment x = 0; x < (Assignment{1} << s->num_vars()); ++x) {
      const auto r = run_strategy(*s, x);
      worst = std::max(worst, r.queries);
      ASSERT_EQ(eval_tree(t, x), r.output) << s->name();
    }
    ASSERT_EQ(t.depth(), worst) << s->name();
    ASSERT_LE(t.leaf_count(), std::size_t{1} << t.depth());
  }
}

TEST(Materialize, NoDependentNodes) {
  const auto t = materialize(*maj_strategy(9));
  std::function<void(std::int32_t, Coset)> walk = [&](std::int32_t id, Coset c) {
    const auto& nd = t.node(id);
    if (nd.is_leaf()) return;
    ASSERT_LT(c.forced_value(nd.query), 0);
    walk(nd.child[0], c.with(nd.query, 0));
    walk(nd.child[1], c.with(nd.query, 1));
  };
  walk(t.root(), Coset(9));
}

TEST(TreeStrategy, RoundTrip) {
  const auto t = *exact_depth(threshold(5, 2)).witness;
  const auto s = tree_strategy(t);
  EXPECT_EQ(s->budget(), t.depth());
  EXPECT_EQ(materialize(*s), t);
}

TEST(Simulate, ThreadsAgree) {
  const auto s = maj_strategy(12);
  const auto f = majority(12);
  const auto one = simulate_all(*s, [&f](Assignment x) { return f(x); }, 1);
  const auto four = simulate_all(*s, [&f](Assignment x) { return f(x); }, 4);
  EXPECT_TRUE(one.correct);
  EXPECT_EQ(one.worst_case, four.worst_case);
  EXPECT_EQ(one.inputs, four.inputs);
}
