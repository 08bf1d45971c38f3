#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "pdtlab/core.hpp"

namespace pdtlab {

/// One linear constraint <mask, x> = rhs over GF(2).
struct Constraint {
  ParityMask mask;
  int rhs = 0;

  int pivot() const { return std::countr_zero(mask.bits) + 1; }
  bool operator==(const Constraint&) const = default;
};

/// Returned by Coset::insert when the new parity is already determined.
struct Dependent {
  int forced = 0;
};

/// Standard parametrization of a coset: free (non-pivot) coordinates in
/// increasing order are the parameters t_1..t_d.
class AffineParam {
 public:
  AffineParam() = default;
  AffineParam(int n, std::uint64_t offset, std::vector<std::uint64_t> basis, std::uint64_t free_positions);

  int num_vars() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::uint64_t offset() const { return offset_; }
  const std::vector<std::uint64_t>& basis() const { return basis_; }
  std::uint64_t free_positions() const { return free_; }

  /// Point of GF(2)^n with parameters t.
  Assignment lift(Assignment t) const;
  /// Parity on parameter space -> parity on GF(2)^n agreeing on the coset.
  ParityMask push_parity(ParityMask t_mask) const;
  /// Parity on GF(2)^n restricted to the coset, as (mask over t, constant).
  std::pair<ParityMask, int> pull_parity(ParityMask x_mask) const;

 private:
  int n_ = 0;
  std::uint64_t offset_ = 0;
  std::vector<std::uint64_t> basis_;
  std::uint64_t free_ = 0;
};

/// Affine subspace of GF(2)^n held as a reduced row echelon system.
/// Pivot of a row is its lowest set bit; rows are sorted by pivot and every
/// pivot column is zero in all other rows.
class Coset {
 public:
  explicit Coset(int n = 0) : n_(n) {}

  int num_vars() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return n_ - rank(); }
  bool empty() const { return empty_; }
  const std::vector<Constraint>& rows() const { return rows_; }
  std::uint64_t pivot_mask() const;

  /// Value the system forces on <q, x>, or -1 if q is independent.
  int forced_value(ParityMask q) const;
  bool contains(Assignment x) const;

  std::variant<Coset, Dependent> insert(ParityMask q, int b) const;
  /// Like insert, but a contradiction yields an empty coset and a
  /// consistent dependent constraint leaves the coset unchanged.
  Coset with(ParityMask q, int b) const;

  AffineParam param() const;

  /// Calls visit(x) for every point of the coset in Gray-code order until
  /// visit returns false.
  template <class Visit>
  void for_each_point(Visit&& visit) const {
    if (empty_) return;
    const AffineParam p = param();
    Assignment x = p.offset();
    const std::uint64_t count = std::uint64_t{1} << p.dim();
    if (!visit(x)) return;
    for (std::uint64_t i = 1; i < count; ++i) {
      x ^= p.basis()[std::countr_zero(i)];
      if (!visit(x)) return;
    }
  }

  bool operator==(const Coset&) const = default;

 private:
  int n_;
  bool empty_ = false;
  std::vector<Constraint> rows_;
};

std::variant<Coset, Dependent> coset_insert(const Coset& c, ParityMask q, int b);

struct Restriction {
  BooleanFunction g;
  AffineParam param;
};

/// g(t) = f(param.lift(t)) on the dim(c) free coordinates of c.
Restriction restrict(const BooleanFunction& f, const Coset& c);

/// Restriction of f by the single constraint <q, x> = b; q nonzero.
Restriction restrict(const BooleanFunction& f, ParityMask q, int b);

}  // namespace pdtlab
