#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdtlab/core.hpp"

namespace pdtlab {

/// Integer Walsh-Hadamard spectrum: coeffs[S] = sum_x f(x) chi_S(x),
/// i.e. 2^n times the Fourier coefficient of f at S.
struct Spectrum {
  int n = 0;
  std::vector<std::int64_t> coeffs;

  std::int64_t operator[](std::uint64_t mask) const { return coeffs[mask]; }
};

/// ANF coefficients: bit S set <=> the monomial prod_{i in S} x_i occurs.
struct AnfPolynomial {
  int n = 0;
  std::vector<std::uint64_t> words;

  bool coeff(std::uint64_t mask) const { return (words[mask >> 6] >> (mask & 63)) & 1U; }
  std::vector<std::uint64_t> monomials() const;
};

Spectrum wht(const BooleanFunction& f);
/// Inverse transform; throws if the spectrum is not that of a +-1 function.
BooleanFunction inverse_wht(const Spectrum& s);

std::uint64_t sparsity(const Spectrum& s);
std::vector<std::uint64_t> support(const Spectrum& s);

/// max over nonzero coefficients of max(0, n - nu2(F(S))).
int granularity(const Spectrum& s);
/// Smallest mask S attaining the granularity (0 for constant functions).
std::uint64_t granularity_witness(const Spectrum& s);

AnfPolynomial anf(const BooleanFunction& f);
int degree(const AnfPolynomial& p);
int deg2(const BooleanFunction& f);

/// Nonzero entries as "mask_hex<TAB>value" lines sorted by mask.
std::string export_spectrum(const Spectrum& s);
/// ANF rendered as "x1x2 + x2x3" style text ("0" when empty).
std::string format_anf(const AnfPolynomial& p);

/// Smallest b with 4^b >= spar, i.e. ceil(log2(spar) / 2).
int sparsity_lower_bound(std::uint64_t spar);

}  // namespace pdtlab
