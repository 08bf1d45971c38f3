#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pdtlab/coset.hpp"
#include "pdtlab/spectral.hpp"
#include "support/oracles.hpp"

using namespace pdtlab;

namespace {

oracle::Table table(const BooleanFunction& f) {
  return oracle::table_of(f.num_vars(), [&f](std::uint64_t x) { return f(x); });
}

}  // namespace

TEST(Wht, Examples) {
  const auto s = wht(majority(3));
  for (std::uint64_t m = 0; m < 8; ++m) {
    const std::int64_t want = m == 7 ? -4 : (std::popcount(m) == 1 ? 4 : 0);
    EXPECT_EQ(s[m], want) << "mask " << m;
  }
  for (int n = 1; n <= 8; ++n) {
    const auto p = wht(build_named(parse_named("parity:" + std::to_string(n))));
    for (std::uint64_t m = 0; m < p.coeffs.size(); ++m)
      ASSERT_EQ(p[m], m == ParityMask::all(n).bits ? (std::int64_t{1} << n) : 0);
  }
  const auto a = wht(build_named(parse_named("and:2")));
  EXPECT_EQ(a.coeffs, (std::vector<std::int64_t>{2, 2, 2, -2}));
}

TEST(Wht, MatchesDirectSummation) {
  for (int n = 1; n <= 7; ++n) {
    const auto f = random_function(n, 500 + n);
    const auto s = wht(f);
    const auto t = table(f);
    for (std::uint64_t m = 0; m < s.coeffs.size(); ++m) ASSERT_EQ(s[m], oracle::fourier(t, m));
  }
}

TEST(Wht, ParsevalAndRoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<BooleanFunction> fs = {majority(9), threshold(10, 3), recursive_majority(2), inner_product(8)};
  for (int i = 0; i < 40; ++i) fs.push_back(random_function(1 + static_cast<int>(rng() % 16), rng()));
  for (const auto& f : fs) {
    const auto s = wht(f);
    std::int64_t sum = 0;
    for (auto c : s.coeffs) sum += c * c;
    ASSERT_EQ(sum, std::int64_t{1} << (2 * f.num_vars()));
    ASSERT_EQ(inverse_wht(s), f);
  }
}

TEST(Wht, SubfunctionIdentities) {
  for (int n = 2; n <= 10; ++n) {
    const auto f = random_function(n, 900 + n);
    const auto s = wht(f);
    const ParityMask last = ParityMask::variable(n);
    const auto f0 = wht(restrict(f, last, 0).g);
    const auto f1 = wht(restrict(f, last, 1).g);
    const std::uint64_t top = std::uint64_t{1} << (n - 1);
    for (std::uint64_t m = 0; m < top; ++m) {
      ASSERT_EQ(2 * f0[m], s[m] + s[m | top]);
      ASSERT_EQ(2 * f1[m], s[m] - s[m | top]);
    }
  }
}

TEST(Sparsity, Examples) {
  for (int n = 1; n <= 15; n += 2) EXPECT_EQ(sparsity(wht(majority(n))), std::uint64_t{1} << (n - 1)) << n;
  // Even n: the tie goes to -1, so even-degree coefficients survive and 2^{n-1} no longer holds.
  for (int n = 2; n <= 12; n += 2) {
    const auto f = majority(n);
    EXPECT_EQ(sparsity(wht(f)), oracle::sparsity(table(f))) << n;
    EXPECT_GT(sparsity(wht(f)), std::uint64_t{1} << (n - 1)) << n;
  }
  EXPECT_EQ(sparsity(wht(recursive_majority(2))), 76U);
  EXPECT_EQ(sparsity(wht(BooleanFunction::constant(5, 1))), 1U);
  const auto sup = support(wht(majority(3)));
  EXPECT_EQ(sup, (std::vector<std::uint64_t>{1, 2, 4, 7}));
}

TEST(Granularity, Examples) {
  EXPECT_EQ(granularity(wht(majority(5))), 3);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(granularity(wht(build_named(parse_named("parity:" + std::to_string(n))))), 0);
  EXPECT_EQ(granularity(wht(threshold(10, 3))), 7);
  EXPECT_EQ(granularity(wht(BooleanFunction::constant(4, -1))), 0);
  EXPECT_EQ(granularity_witness(wht(majority(3))), 1U);
}

TEST(Granularity, MatchesOracle) {
  for (int n = 1; n <= 7; ++n) {
    for (int seed = 0; seed < 5; ++seed) {
      const auto f = random_function(n, 1000 * n + seed);
      const auto t = table(f);
      ASSERT_EQ(granularity(wht(f)), oracle::granularity(t, n));
      ASSERT_EQ(sparsity(wht(f)), oracle::sparsity(t));
      ASSERT_EQ(deg2(f), oracle::deg2(t));
    }
  }
}

TEST(Granularity, RestrictionNeverIncreases) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const auto f = random_function(n, rng());
    const int g = granularity(wht(f));
    Coset c(n);
    const int k = 1 + static_cast<int>(rng() % n);
    for (int i = 0; i < k; ++i) c = c.with(ParityMask{rng() & ParityMask::all(n).bits}, rng() & 1);
    if (c.empty()) continue;
    ASSERT_LE(granularity(wht(restrict(f, c).g)), g);
  }
}

TEST(Anf, Examples) {
  const auto m3 = anf(majority(3));
  EXPECT_EQ(m3.monomials(), (std::vector<std::uint64_t>{3, 5, 6}));
  EXPECT_EQ(format_anf(m3), "x1x2 + x1x3 + x2x3");
  for (int n = 1; n <= 9; ++n) {
    EXPECT_EQ(anf(build_named(parse_named("and:" + std::to_string(n)))).monomials(),
              (std::vector<std::uint64_t>{ParityMask::all(n).bits}));
    std::vector<std::uint64_t> lin;
    for (int i = 1; i <= n; ++i) lin.push_back(ParityMask::variable(i).bits);
    EXPECT_EQ(anf(build_named(parse_named("parity:" + std::to_string(n)))).monomials(), lin);
  }
}

TEST(Anf, EvaluatesBackToFunction) {
  for (int n = 1; n <= 10; ++n) {
    const auto f = random_function(n, 77 + n);
    const auto p = anf(f);
    const auto mons = p.monomials();
    for (Assignment x = 0; x < f.table_size(); ++x) {
      int v = 0;
      for (auto m : mons) v ^= (m & ~x) == 0;
      ASSERT_EQ(v, static_cast<int>(f.bit(x)));
    }
  }
}

TEST(Deg2, Examples) {
  EXPECT_EQ(deg2(majority(6)), 4);
  EXPECT_EQ(deg2(majority(8)), 8);
  EXPECT_EQ(deg2(recursive_majority(2)), 4);
  EXPECT_EQ(deg2(BooleanFunction::constant(3, 1)), 0);
  EXPECT_EQ(deg2(BooleanFunction::constant(3, -1)), 0);
}

TEST(Bounds, InequalitiesOnRandomFunctions) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto f = random_function(n, rng());
    if (f.is_constant()) continue;
    const auto s = wht(f);
    const int gran = granularity(s);
    const auto spar = sparsity(s);
    const double lg = std::log2(static_cast<double>(spar));
    ASSERT_LE(deg2(f), gran + 1);
    ASSERT_LE(sparsity_lower_bound(spar), gran);
    if (spar >= 2) {
      ASSERT_LE(gran, lg - 1 + 1e-9);
      ASSERT_LE(deg2(f), lg + 1e-9);
    }
  }
}

TEST(Bounds, InnerProductIsTight) {
  for (int m = 1; m <= 6; ++m) {
    const auto s = wht(inner_product(2 * m));
    EXPECT_EQ(granularity(s), m);
    EXPECT_EQ(sparsity(s), std::uint64_t{1} << (2 * m));
  }
}

TEST(Export, SpectrumLines) {
  EXPECT_EQ(export_spectrum(wht(majority(3))), "1\t4\n2\t4\n4\t4\n7\t-4\n");
  EXPECT_EQ(sparsity_lower_bound(1), 0);
  EXPECT_EQ(sparsity_lower_bound(16), 2);
  EXPECT_EQ(sparsity_lower_bound(17), 3);
  EXPECT_EQ(sparsity_lower_bound(76), 4);
}
