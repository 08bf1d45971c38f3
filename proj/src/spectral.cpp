#include "pdtlab/spectral.hpp"

#include <algorithm>
#include <cstdio>

namespace pdtlab {

namespace {

void butterfly(std::vector<std::int64_t>& a) {
  const std::size_t size = a.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t u = a[j];
        const std::int64_t v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
}

}  // namespace

Spectrum wht(const BooleanFunction& f) {
  Spectrum s{f.num_vars(), std::vector<std::int64_t>(f.table_size())};
  for (std::uint64_t x = 0; x < f.table_size(); ++x) s.coeffs[x] = f(x);
  butterfly(s.coeffs);
  return s;
}

BooleanFunction inverse_wht(const Spectrum& s) {
  std::vector<std::int64_t> a = s.coeffs;
  butterfly(a);
  const std::int64_t scale = std::int64_t{1} << s.n;
  return BooleanFunction::from_predicate(s.n, [&](Assignment x) {
    if (a[x] == -scale) return true;
    if (a[x] == scale) return false;
    throw Error("spectrum does not describe a +-1 valued function");
  });
}

std::uint64_t sparsity(const Spectrum& s) {
  return static_cast<std::uint64_t>(std::count_if(s.coeffs.begin(), s.coeffs.end(), [](auto c) { return c != 0; }));
}

std::vector<std::uint64_t> support(const Spectrum& s) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < s.coeffs.size(); ++m)
    if (s.coeffs[m] != 0) out.push_back(m);
  return out;
}

namespace {

int coeff_granularity(int n, std::int64_t c) {
  const Valuation v = nu2(c);
  if (v.infinite) return 0;
  return std::max(0, n - v.value);
}

}  // namespace

int granularity(const Spectrum& s) {
  int g = 0;
  for (auto c : s.coeffs) g = std::max(g, coeff_granularity(s.n, c));
  return g;
}

std::uint64_t granularity_witness(const Spectrum& s) {
  const int g = granularity(s);
  for (std::uint64_t m = 0; m < s.coeffs.size(); ++m)
    if (s.coeffs[m] != 0 && coeff_granularity(s.n, s.coeffs[m]) == g) return m;
  return 0;
}

AnfPolynomial anf(const BooleanFunction& f) {
  const int n = f.num_vars();
  AnfPolynomial p{n, std::vector<std::uint64_t>(f.words().begin(), f.words().end())};
  // Subset-sum (Moebius) transform over GF(2): in-word strides first.
  static constexpr std::uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
                                            0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL};
  for (int i = 0; i < std::min(n, 6); ++i) {
    const int shift = 1 << i;
    for (auto& w : p.words) w ^= (w & kLow[i]) << shift;
  }
  for (std::size_t h = 1; h < p.words.size(); h <<= 1)
    for (std::size_t i = 0; i < p.words.size(); i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) p.words[j + h] ^= p.words[j];
  if (n < 6) p.words[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  return p;
}

std::vector<std::uint64_t> AnfPolynomial::monomials() const {
  std::vector<std::uint64_t> out;
  for (std::size_t w = 0; w < words.size(); ++w)
    for (std::uint64_t bits = words[w]; bits; bits &= bits - 1) out.push_back(w * 64 + std::countr_zero(bits));
  return out;
}

int degree(const AnfPolynomial& p) {
  int d = 0;
  for (auto m : p.monomials()) d = std::max(d, std::popcount(m));
  return d;
}

int deg2(const BooleanFunction& f) { return degree(anf(f)); }

std::string export_spectrum(const Spectrum& s) {
  std::string out;
  char buf[64];
  for (std::uint64_t m = 0; m < s.coeffs.size(); ++m) {
    if (s.coeffs[m] == 0) continue;
    std::snprintf(buf, sizeof buf, "%llx\t%lld\n", static_cast<unsigned long long>(m), static_cast<long long>(s.coeffs[m]));
    out += buf;
  }
  return out;
}

std::string format_anf(const AnfPolynomial& p) {
  std::string out;
  for (auto m : p.monomials()) {
    if (!out.empty()) out += " + ";
    if (m == 0) {
      out += "1";
      continue;
    }
    for (int i = 0; i < p.n; ++i)
      if ((m >> i) & 1U) out += "x" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

int sparsity_lower_bound(std::uint64_t spar) {
  int b = 0;
  while (b < 32 && (std::uint64_t{1} << (2 * b)) < spar) ++b;
  return b;
}

}  // namespace pdtlab
