#include "pdtlab/coset.hpp"

#include <algorithm>

namespace pdtlab {

AffineParam::AffineParam(int n, std::uint64_t offset, std::vector<std::uint64_t> basis, std::uint64_t free_positions)
    : n_(n), offset_(offset), basis_(std::move(basis)), free_(free_positions) {}

Assignment AffineParam::lift(Assignment t) const {
  Assignment x = offset_;
  for (std::size_t j = 0; t; ++j, t >>= 1)
    if (t & 1U) x ^= basis_[j];
  return x;
}

ParityMask AffineParam::push_parity(ParityMask t_mask) const {
  // On the coset t_j equals the j-th free coordinate.
  std::uint64_t out = 0;
  std::uint64_t free = free_;
  for (std::uint64_t t = t_mask.bits; t; t >>= 1) {
    const std::uint64_t low = free & (~free + 1);
    if (t & 1U) out |= low;
    free &= free - 1;
  }
  return ParityMask{out};
}

std::pair<ParityMask, int> AffineParam::pull_parity(ParityMask x_mask) const {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < basis_.size(); ++j)
    if (std::popcount(x_mask.bits & basis_[j]) & 1) t |= std::uint64_t{1} << j;
  return {ParityMask{t}, x_mask.apply(offset_)};
}

std::uint64_t Coset::pivot_mask() const {
  std::uint64_t m = 0;
  for (const auto& r : rows_) m |= std::uint64_t{1} << (r.pivot() - 1);
  return m;
}

namespace {

// Reduces q against the rows; returns the residual mask and the rhs
// accumulated from the rows that were added.
std::pair<std::uint64_t, int> reduce(const std::vector<Constraint>& rows, std::uint64_t q) {
  int acc = 0;
  for (const auto& r : rows) {
    if ((q >> (r.pivot() - 1)) & 1U) {
      q ^= r.mask.bits;
      acc ^= r.rhs;
    }
  }
  return {q, acc};
}

}  // namespace

int Coset::forced_value(ParityMask q) const {
  auto [residual, acc] = reduce(rows_, q.bits);
  return residual == 0 ? acc : -1;
}

bool Coset::contains(Assignment x) const {
  if (empty_) return false;
  return std::all_of(rows_.begin(), rows_.end(), [x](const Constraint& r) { return r.mask.apply(x) == r.rhs; });
}

std::variant<Coset, Dependent> Coset::insert(ParityMask q, int b) const {
  auto [residual, acc] = reduce(rows_, q.bits);
  if (residual == 0) return Dependent{acc};
  Constraint row{ParityMask{residual}, b ^ acc};
  const std::uint64_t pivot_bit = residual & (~residual + 1);
  Coset out = *this;
  for (auto& r : out.rows_) {
    if (r.mask.bits & pivot_bit) {
      r.mask = r.mask ^ row.mask;
      r.rhs ^= row.rhs;
    }
  }
  auto pos = std::lower_bound(out.rows_.begin(), out.rows_.end(), row,
                              [](const Constraint& a, const Constraint& c) { return a.pivot() < c.pivot(); });
  out.rows_.insert(pos, row);
  return out;
}

Coset Coset::with(ParityMask q, int b) const {
  if (empty_) return *this;
  auto r = insert(q, b);
  if (auto* c = std::get_if<Coset>(&r)) return std::move(*c);
  if (std::get<Dependent>(r).forced == b) return *this;
  Coset out(n_);
  out.empty_ = true;
  out.rows_ = rows_;
  return out;
}

AffineParam Coset::param() const {
  const std::uint64_t all = ParityMask::all(n_).bits;
  const std::uint64_t free = all & ~pivot_mask();
  std::uint64_t offset = 0;
  for (const auto& r : rows_)
    if (r.rhs) offset |= std::uint64_t{1} << (r.pivot() - 1);
  std::vector<std::uint64_t> basis;
  basis.reserve(n_ - rank());
  for (std::uint64_t rest = free; rest; rest &= rest - 1) {
    const std::uint64_t bit = rest & (~rest + 1);
    std::uint64_t v = bit;
    for (const auto& r : rows_)
      if (r.mask.bits & bit) v |= std::uint64_t{1} << (r.pivot() - 1);
    basis.push_back(v);
  }
  return {n_, offset, std::move(basis), free};
}

std::variant<Coset, Dependent> coset_insert(const Coset& c, ParityMask q, int b) { return c.insert(q, b); }

Restriction restrict(const BooleanFunction& f, const Coset& c) {
  if (c.empty()) throw Error("cannot restrict to an empty coset");
  if (c.num_vars() != f.num_vars()) throw Error("coset and function disagree on the variable count");
  AffineParam p = c.param();
  const int d = p.dim();
  std::vector<std::uint64_t> words(d >= 6 ? std::size_t{1} << (d - 6) : 1, 0);
  const std::uint64_t count = std::uint64_t{1} << d;
  Assignment x = p.offset();
  Assignment t = 0;
  for (std::uint64_t i = 0;;) {
    if (f.bit(x)) words[t >> 6] |= std::uint64_t{1} << (t & 63);
    if (++i == count) break;
    const int j = std::countr_zero(i);
    x ^= p.basis()[j];
    t ^= std::uint64_t{1} << j;
  }
  return {BooleanFunction(d, std::move(words)), std::move(p)};
}

Restriction restrict(const BooleanFunction& f, ParityMask q, int b) {
  return restrict(f, Coset(f.num_vars()).with(q, b));
}

}  // namespace pdtlab
