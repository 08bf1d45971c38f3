#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdtlab/core.hpp"
#include "pdtlab/pdt.hpp"

namespace pdtlab {

/// Lower bounds on the parity decision tree depth of f.
struct BoundProfile {
  std::uint64_t spar = 0;
  int gran = 0;
  int deg2 = 0;

  int sparsity_bound = 0;  // ceil(log2(spar) / 2)
  int deg2_bound = 0;
  int gran_bound = 0;  // gran + 1, or 0 for constant f
  std::optional<int> cert_bound;
  int best_lower = 0;
  std::optional<int> upper;
};

BoundProfile bound_profile(const BooleanFunction& f, bool with_certificate = false);

struct SolveOptions {
  /// Wall-clock limit; zero means unlimited.
  std::chrono::milliseconds time_budget{0};
  /// Node-expansion limit; zero means unlimited.
  std::uint64_t node_budget = 0;
  int threads = 1;
  bool memoize = true;
  /// Lower-bound cuts (gran + 1, deg2, sparsity) on every subfunction.
  bool use_bounds = true;
  /// Known-correct tree used as the starting incumbent.
  std::optional<ParityDecisionTree> incumbent;
};

struct SolveReport {
  bool exact = false;
  int depth = 0;  // valid when exact
  int lower = 0;
  int upper = 0;
  std::optional<ParityDecisionTree> witness;
  BoundProfile bounds;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t memo_hits = 0;
  double wall_ms = 0;
};

/// Minimal parity decision tree depth by branch and bound over restricted
/// subfunctions. On budget exhaustion the report carries a certified
/// interval instead of an exact value.
SolveReport exact_depth(const BooleanFunction& f, const SolveOptions& options = {});

/// Greedy tree: at each node the query minimising the larger child lower
/// bound. Always correct; used as the default incumbent.
ParityDecisionTree greedy_tree(const BooleanFunction& f);

/// Trivial tree reading x_1, x_2, ... until the value is fixed.
ParityDecisionTree variable_tree(const BooleanFunction& f);

/// Outcome of driving a claimed tree with the granularity adversary.
struct Refutation {
  bool applicable = false;
  std::uint64_t character = 0;         // S attaining gran(f)
  std::vector<QueryStep> path;         // adversary answers, root to leaf
  int leaf_label = 1;
  /// Two points reaching the leaf with different values of f, or one point
  /// (first == second) where f disagrees with the leaf label.
  Assignment first = 0;
  Assignment second = 0;
};

Refutation adversary_refute(const BooleanFunction& f, const ParityDecisionTree& t);

struct CertificateReport {
  int value = 0;  // max over x (lower end when some x is unresolved)
  std::vector<int> per_x_lower;
  std::vector<int> per_x_upper;
  bool exact = true;
};

/// Parity certificate complexity: per x, the least co-dimension of an
/// affine subspace through x on which f is constant. node_budget (zero is
/// unlimited) applies to each point separately; an exhausted point reports
/// an interval.
CertificateReport parity_certificate(const BooleanFunction& f, std::uint64_t node_budget = 0);

/// JSON object with fields n, function_id, exact_depth | interval, bounds,
/// nodes_expanded, memo_hits, wall_ms.
std::string solve_report_json(const SolveReport& r, int n, const std::string& function_id);

}  // namespace pdtlab
