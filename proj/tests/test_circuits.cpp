#include <gtest/gtest.h>

#include <random>

#include "pdtlab/circuits.hpp"
#include "pdtlab/core.hpp"
#include "support/generators.hpp"

using namespace pdtlab;

namespace {

constexpr const char* kMaj3 = R"(# (x1 ^ x2) & (x2 ^ x3) ^ x2
INPUT 1
INPUT 2
INPUT 3
4 = XOR 1 2
5 = XOR 2 3
6 = AND 4 5
7 = XOR 6 2
OUTPUT 7
)";

}  // namespace

TEST(Netlist, Examples) {
  const auto x = parse_circuit("INPUT 1\nINPUT 2\nINPUT 3\n4 = XOR 1 2\n5 = XOR 4 3\nOUTPUT 5\n");
  EXPECT_EQ(and_count(x), 0);
  for (Assignment a = 0; a < 8; ++a) EXPECT_EQ(eval_circuit(x, a), std::popcount(a) % 2 ? -1 : 1);

  const auto m = parse_circuit(kMaj3);
  EXPECT_EQ(and_count(m), 1);
  EXPECT_EQ(m.truth_table(), majority(3));

  const auto a = parse_circuit("INPUT 1\nINPUT 2\n3 = AND 1 2\nOUTPUT 3\n");
  EXPECT_EQ(and_count(a), 1);
  EXPECT_EQ(a.truth_table(), build_named(parse_named("and:2")));
}

TEST(Netlist, AnyOrderAndRoundTrip) {
  const auto c = parse_circuit("OUTPUT 7\n7 = XOR 6 2\n6 = AND 4 5\nINPUT 3\n5 = XOR 2 3\nINPUT 1\n4 = XOR 1 2\nINPUT 2\n");
  EXPECT_EQ(c.truth_table(), majority(3));
  const auto again = parse_circuit(write_circuit(c));
  EXPECT_EQ(again.truth_table(), majority(3));
  EXPECT_EQ(and_count(again), 1);
}

TEST(Netlist, Errors) {
  EXPECT_THROW(parse_circuit("INPUT 1\n2 = AND 1 3\nOUTPUT 2\n"), ParseError);            // undefined
  EXPECT_THROW(parse_circuit("INPUT 1\n2 = AND 1 3\n3 = XOR 2 1\nOUTPUT 3\n"), ParseError);  // cycle
  EXPECT_THROW(parse_circuit("INPUT 1\n2 = OR 1 1\nOUTPUT 2\n"), ParseError);
  EXPECT_THROW(parse_circuit("INPUT 1\n2 = NOT 1\n"), ParseError);                        // no output
  EXPECT_THROW(parse_circuit("INPUT 1\nINPUT 1\nOUTPUT 1\n"), ParseError);
  EXPECT_THROW(parse_circuit("INPUT 2\nOUTPUT 2\n"), ParseError);                         // inputs must be 1..n
  EXPECT_THROW(parse_circuit("INPUT 1\n2 = XOR 1\nOUTPUT 2\n"), ParseError);
  EXPECT_THROW(parse_circuit("INPUT x\nOUTPUT 1\n"), ParseError);
}

TEST(Simulation, Examples) {
  const auto lin = parse_circuit("INPUT 1\nINPUT 2\n3 = XOR 1 2\n4 = NOT 3\nOUTPUT 4\n");
  auto rep = simulate_all(*circuit_to_strategy(lin), [&lin](Assignment x) { return lin.eval(x); });
  EXPECT_TRUE(rep.correct);
  EXPECT_EQ(rep.worst_case, 1);

  const auto m = parse_circuit(kMaj3);
  rep = simulate_all(*circuit_to_strategy(m), [&m](Assignment x) { return m.eval(x); });
  EXPECT_TRUE(rep.correct);
  EXPECT_EQ(rep.worst_case, 2);
  EXPECT_EQ(materialize(*circuit_to_strategy(m)).depth(), 2);

  const auto and4 = parse_circuit("INPUT 1\nINPUT 2\nINPUT 3\nINPUT 4\n5 = AND 1 2\n6 = AND 5 3\n7 = AND 6 4\nOUTPUT 7\n");
  rep = simulate_all(*circuit_to_strategy(and4), [&and4](Assignment x) { return and4.eval(x); });
  EXPECT_TRUE(rep.correct);
  EXPECT_LE(rep.worst_case, 4);
}

TEST(Simulation, ConstantCircuitNeedsNoQuery) {
  const auto c = parse_circuit("INPUT 1\n2 = XOR 1 1\n3 = AND 2 1\n4 = NOT 3\nOUTPUT 4\n");
  const auto rep = simulate_all(*circuit_to_strategy(c), [&c](Assignment x) { return c.eval(x); });
  EXPECT_TRUE(rep.correct);
  EXPECT_EQ(rep.worst_case, 0);
}

TEST(Simulation, RandomCircuitsAllChoices) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int ands = static_cast<int>(rng() % 7);
    const auto c = parse_circuit(testing_support::random_netlist(rng, n, ands, static_cast<int>(rng() % 8)));
    for (auto choice : {AndInputChoice::SmallerMask, AndInputChoice::Left, AndInputChoice::Right}) {
      const auto s = circuit_to_strategy(c, choice);
      const auto rep = simulate_all(*s, [&c](Assignment x) { return c.eval(x); });
      ASSERT_TRUE(rep.correct);
      ASSERT_LE(rep.worst_case, and_count(c) + 1);
      ASSERT_FALSE(rep.dependent_query);
    }
  }
}
