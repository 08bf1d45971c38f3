#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "pdtlab/pdt.hpp"

namespace pdtlab {

/// A block of variables whose members are either all equal (type 1) or
/// balanced between ones and zeros (type 2).
struct Block {
  std::uint64_t members = 0;
  bool balanced = false;

  int size() const { return std::popcount(members); }
  /// Lowest member, 1-based.
  int rep() const { return std::countr_zero(members) + 1; }
};

struct BlockState {
  std::vector<Block> blocks;

  static BlockState singletons(int n);
  /// Merges the blocks holding variables a and b after learning x_a ^ x_b.
  void merge(int a, int b, int parity);
  int block_of(int var) const;
};

/// Session type shared by the block-merging strategies; exposes the block
/// partition so callers can inspect it between queries.
class BlockSession : public StrategySession {
 public:
  virtual const BlockState& state() const = 0;
};

/// Majority in n - B(n) + 1 queries: merge equal-size all-equal blocks,
/// then read one variable of the largest all-equal block.
std::unique_ptr<Strategy> maj_strategy(int n);

/// THR_n^2 for odd n >= 3 in n - 1 queries.
std::unique_ptr<Strategy> thr2_strategy(int n);

/// THR_n^3 for n = 2 (mod 4), n >= 6, in n - 1 queries.
std::unique_ptr<Strategy> thr3_strategy(int n);

/// Read-once formula of MAJ3 gates. Gate inputs are variables (v >= 1) or
/// earlier gates (encoded as -(index + 1)).
struct Maj3Tree {
  struct Gate {
    std::array<int, 3> in;
  };
  int n = 0;
  std::vector<Gate> gates;
  int root = 0;

  /// Complete ternary tree of the given depth over 3^depth variables laid
  /// out in consecutive blocks, matching recursive_majority.
  static Maj3Tree complete(int depth);
  /// Throws unless every variable 1..n is used exactly once and gate
  /// references point backwards.
  void validate() const;
  int eval(Assignment x) const;
  int internal_count() const { return static_cast<int>(gates.size()); }
};

/// Processes a deepest MAJ3 gate with three variable inputs (y, z, t) by
/// asking y ^ z; uses internal_count + 1 queries.
std::unique_ptr<Strategy> maj3tree_strategy(Maj3Tree shape);
std::unique_ptr<Strategy> rmaj_strategy(int depth);

/// Given a correct tree for THR_{n+2}^{k+1} of depth s, returns a strategy
/// for THR_n^k using at most s - 1 queries. Wires n+1 and n+2 of the tree
/// play the roles of y and not-y.
std::unique_ptr<Strategy> thr_reduce(const ParityDecisionTree& t, int n, int k);

}  // namespace pdtlab
