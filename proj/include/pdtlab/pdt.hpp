#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdtlab/core.hpp"
#include "pdtlab/coset.hpp"

namespace pdtlab {

/// Parity decision tree. Children are indexed by the parity bit b of the
/// query; b corresponds to the edge label (-1)^b.
class ParityDecisionTree {
 public:
  struct Node {
    ParityMask query;  // empty for leaves
    int label = 1;     // leaves only
    std::int32_t child[2] = {-1, -1};

    bool is_leaf() const { return query.empty(); }
  };

  ParityDecisionTree() : ParityDecisionTree(0, 1) {}

  static ParityDecisionTree leaf(int n, int label) { return ParityDecisionTree(n, label); }
  static ParityDecisionTree query(ParityMask q, const ParityDecisionTree& zero, const ParityDecisionTree& one);

  int num_vars() const { return n_; }
  std::int32_t root() const { return root_; }
  const Node& node(std::int32_t id) const { return nodes_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }

  int depth() const;
  std::size_t leaf_count() const;

  /// Arena construction; the tree must be finished with set_root.
  std::int32_t add_leaf(int label);
  std::int32_t add_query(ParityMask q, std::int32_t zero, std::int32_t one);
  void set_root(std::int32_t id) { root_ = id; }
  static ParityDecisionTree empty_arena(int n);

  /// Copies the subtree rooted at `id` into a standalone tree.
  ParityDecisionTree subtree(std::int32_t id) const;
  /// Applies f to every query mask.
  ParityDecisionTree map_queries(int n, const std::function<ParityMask(ParityMask)>& f) const;

  bool operator==(const ParityDecisionTree& o) const;

 private:
  ParityDecisionTree(int n, int label);

  int n_;
  std::vector<Node> nodes_;
  std::int32_t root_ = 0;
};

int eval_tree(const ParityDecisionTree& t, Assignment x);

/// s-expression form: (q <mask-hex> (0 <t0>) (1 <t1>)) | (leaf -1) | (leaf 1).
std::string write_tree(const ParityDecisionTree& t);
ParityDecisionTree read_tree(std::string_view text, int n);
ParityDecisionTree load_tree(const std::string& path, int n);

enum class VerifyMode { Exhaustive, LeafWise };

struct VerifyReport {
  bool pass = true;
  std::optional<Assignment> witness;
  std::uint64_t points_checked = 0;
  std::uint64_t infeasible_leaves = 0;
};

/// Value of the target function at a point, in {-1, 1}.
using PointFunction = std::function<int(Assignment)>;

VerifyReport verify_tree(const ParityDecisionTree& t, const BooleanFunction& f, VerifyMode mode = VerifyMode::Exhaustive);
VerifyReport verify_tree(const ParityDecisionTree& t, int n, const PointFunction& f, VerifyMode mode);

struct QueryStep {
  ParityMask query;
  int answer = 0;
};

struct Query {
  ParityMask mask;
};
struct Output {
  int value = 1;
};
using Action = std::variant<Query, Output>;

/// One run of an interactive protocol. next() must not change state;
/// answer() feeds the parity of the last query.
class StrategySession {
 public:
  virtual ~StrategySession() = default;
  virtual Action next() const = 0;
  virtual void answer(int bit) = 0;
  virtual std::unique_ptr<StrategySession> clone() const = 0;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual int num_vars() const = 0;
  /// Declared worst-case number of queries.
  virtual int budget() const = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<StrategySession> start() const = 0;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Answers parity queries about a hidden assignment and counts them.
class QueryOracle {
 public:
  explicit QueryOracle(Assignment x) : x_(x) {}
  int ask(ParityMask q) {
    ++count_;
    return q.apply(x_);
  }
  int count() const { return count_; }

 private:
  Assignment x_;
  int count_ = 0;
};

struct RunResult {
  int output = 1;
  int queries = 0;
  std::vector<QueryStep> transcript;
};

RunResult run_strategy(const Strategy& s, QueryOracle& oracle);
RunResult run_strategy(const Strategy& s, Assignment x);

/// Expands a strategy into a tree. Dependent queries follow the forced
/// branch without emitting a node.
ParityDecisionTree materialize(const Strategy& s);

struct SimulationReport {
  bool correct = true;
  std::optional<Assignment> witness;
  int worst_case = 0;
  std::uint64_t inputs = 0;
  bool dependent_query = false;
};

/// Runs s on every input of {0,1}^n and compares with f.
SimulationReport simulate_all(const Strategy& s, const PointFunction& f, int threads = 1);

/// Turns a tree into a strategy (walks it, asking each query).
std::unique_ptr<Strategy> tree_strategy(ParityDecisionTree t, std::string name = "tree");

}  // namespace pdtlab
