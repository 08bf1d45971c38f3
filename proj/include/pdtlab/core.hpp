#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdtlab {

#ifndef PDTLAB_N_MAX
#define PDTLAB_N_MAX 24
#endif

/// Largest variable count for which a truth table may be materialized.
inline constexpr int kMaxVars = PDTLAB_N_MAX;

/// Largest variable count for masks, trees and strategies (tables are not
/// needed there, so this is bounded by the mask width only).
inline constexpr int kMaxMaskVars = 63;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Assignment x in {0,1}^n packed as bit i-1 <-> x_i, which is also its
/// truth-table index.
using Assignment = std::uint64_t;

/// Subset S of [n] packed the same way as an assignment.
struct ParityMask {
  std::uint64_t bits = 0;

  constexpr ParityMask() = default;
  constexpr explicit ParityMask(std::uint64_t b) : bits(b) {}

  static constexpr ParityMask variable(int i) { return ParityMask{std::uint64_t{1} << (i - 1)}; }
  static constexpr ParityMask all(int n) {
    return ParityMask{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  constexpr bool empty() const { return bits == 0; }
  constexpr int size() const { return std::popcount(bits); }
  constexpr bool contains(int i) const { return (bits >> (i - 1)) & 1U; }
  constexpr bool fits(int n) const { return n >= 64 || (bits >> n) == 0; }

  /// Parity of x restricted to S.
  constexpr int apply(Assignment x) const { return std::popcount(bits & x) & 1; }
  /// Fourier character chi_S(x) in {-1, 1}.
  constexpr int chi(Assignment x) const { return apply(x) ? -1 : 1; }

  constexpr ParityMask operator^(ParityMask o) const { return ParityMask{bits ^ o.bits}; }
  constexpr auto operator<=>(const ParityMask&) const = default;
};

/// 2-adic valuation; `infinite` only for the valuation of zero.
struct Valuation {
  int value = 0;
  bool infinite = false;

  static constexpr Valuation infinity() { return {0, true}; }
  constexpr bool operator==(const Valuation&) const = default;
  constexpr bool operator<(const Valuation& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return value < o.value;
  }
};

Valuation nu2(std::int64_t value);
int ones_in_binary(std::uint64_t m);

/// f : {0,1}^n -> {-1,1} stored as a packed table; bit set <=> f(x) = -1.
class BooleanFunction {
 public:
  /// Constant +1 ("false") on n variables.
  explicit BooleanFunction(int n = 0);
  BooleanFunction(int n, std::vector<std::uint64_t> words);

  static BooleanFunction from_predicate(int n, const std::function<bool(Assignment)>& is_true);
  static BooleanFunction constant(int n, int value);

  int num_vars() const { return n_; }
  std::uint64_t table_size() const { return std::uint64_t{1} << n_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool bit(Assignment x) const { return (words_[x >> 6] >> (x & 63)) & 1U; }
  int operator()(Assignment x) const { return bit(x) ? -1 : 1; }

  std::uint64_t count_true() const;
  bool is_constant() const;

  bool operator==(const BooleanFunction&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

int eval(const BooleanFunction& f, Assignment x);

enum class Family { Maj, Thr, RMaj, And, Or, Parity, InnerProduct, Constant, Random };

struct NamedFunction {
  Family family;
  std::vector<std::int64_t> params;

  /// Stable textual id, e.g. "thr:10,3".
  std::string id() const;
  int num_vars() const;
};

/// Parses "maj:7", "thr:10,3", "rmaj:2", "and:4", "or:4", "parity:6",
/// "ip:6" (n = 2m variables), "const:5,-1", "random:8,42".
NamedFunction parse_named(std::string_view spec);
BooleanFunction build_named(const NamedFunction& fn);
BooleanFunction build_named(Family family, std::span<const std::int64_t> params);

BooleanFunction majority(int n);
BooleanFunction threshold(int n, int k);
BooleanFunction recursive_majority(int depth);
BooleanFunction inner_product(int n);
BooleanFunction random_function(int n, std::uint64_t seed);

/// RMAJ_k evaluated directly on an assignment; works past kMaxVars
/// (k <= 3 fits in 27 bits).
int recursive_majority_value(int depth, Assignment x);

/// PDTTT 1 truth-table text format.
std::string write_pdttt(const BooleanFunction& f);
BooleanFunction read_pdttt(std::string_view text);
BooleanFunction load_pdttt(const std::string& path);

std::uint64_t fnv1a(std::string_view bytes);
std::string read_file(const std::string& path);

}  // namespace pdtlab
