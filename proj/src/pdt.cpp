#include "pdtlab/pdt.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <thread>

namespace pdtlab {

ParityDecisionTree::ParityDecisionTree(int n, int label) : n_(n) { nodes_.push_back(Node{ParityMask{}, label, {-1, -1}}); }

ParityDecisionTree ParityDecisionTree::empty_arena(int n) {
  ParityDecisionTree t(n, 1);
  t.nodes_.clear();
  t.root_ = -1;
  return t;
}

std::int32_t ParityDecisionTree::add_leaf(int label) {
  nodes_.push_back(Node{ParityMask{}, label, {-1, -1}});
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ParityDecisionTree::add_query(ParityMask q, std::int32_t zero, std::int32_t one) {
  if (q.empty()) throw Error("tree query masks must be nonzero");
  nodes_.push_back(Node{q, 1, {zero, one}});
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

ParityDecisionTree ParityDecisionTree::query(ParityMask q, const ParityDecisionTree& zero, const ParityDecisionTree& one) {
  if (zero.n_ != one.n_) throw Error("subtrees disagree on the variable count");
  ParityDecisionTree t = empty_arena(zero.n_);
  auto graft = [&t](const ParityDecisionTree& sub) {
    const auto base = static_cast<std::int32_t>(t.nodes_.size());
    for (Node nd : sub.nodes_) {
      for (auto& c : nd.child)
        if (c >= 0) c += base;
      t.nodes_.push_back(nd);
    }
    return base + sub.root_;
  };
  const auto z = graft(zero);
  const auto o = graft(one);
  t.root_ = t.add_query(q, z, o);
  return t;
}

namespace {

int depth_from(const ParityDecisionTree& t, std::int32_t id) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) return 0;
  return 1 + std::max(depth_from(t, nd.child[0]), depth_from(t, nd.child[1]));
}

std::size_t leaves_from(const ParityDecisionTree& t, std::int32_t id) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) return 1;
  return leaves_from(t, nd.child[0]) + leaves_from(t, nd.child[1]);
}

bool equal_from(const ParityDecisionTree& a, std::int32_t i, const ParityDecisionTree& b, std::int32_t j) {
  const auto& x = a.node(i);
  const auto& y = b.node(j);
  if (x.is_leaf() != y.is_leaf()) return false;
  if (x.is_leaf()) return x.label == y.label;
  return x.query == y.query && equal_from(a, x.child[0], b, y.child[0]) && equal_from(a, x.child[1], b, y.child[1]);
}

}  // namespace

int ParityDecisionTree::depth() const { return depth_from(*this, root_); }
std::size_t ParityDecisionTree::leaf_count() const { return leaves_from(*this, root_); }

bool ParityDecisionTree::operator==(const ParityDecisionTree& o) const {
  return n_ == o.n_ && equal_from(*this, root_, o, o.root_);
}

ParityDecisionTree ParityDecisionTree::subtree(std::int32_t id) const {
  ParityDecisionTree t = empty_arena(n_);
  std::function<std::int32_t(std::int32_t)> copy = [&](std::int32_t i) -> std::int32_t {
    const auto& nd = nodes_[i];
    if (nd.is_leaf()) return t.add_leaf(nd.label);
    const auto z = copy(nd.child[0]);
    const auto o = copy(nd.child[1]);
    return t.add_query(nd.query, z, o);
  };
  t.root_ = copy(id);
  return t;
}

ParityDecisionTree ParityDecisionTree::map_queries(int n, const std::function<ParityMask(ParityMask)>& f) const {
  ParityDecisionTree t = *this;
  t.n_ = n;
  for (auto& nd : t.nodes_)
    if (!nd.is_leaf()) {
      nd.query = f(nd.query);
      if (nd.query.empty()) throw Error("query mapped to the empty parity");
    }
  return t;
}

int eval_tree(const ParityDecisionTree& t, Assignment x) {
  std::int32_t id = t.root();
  while (!t.node(id).is_leaf()) {
    const auto& nd = t.node(id);
    id = nd.child[nd.query.apply(x)];
  }
  return t.node(id).label;
}

namespace {

void write_node(const ParityDecisionTree& t, std::int32_t id, std::string& out) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) {
    out += nd.label == -1 ? "(leaf -1)" : "(leaf 1)";
    return;
  }
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, nd.query.bits, 16);
  out += "(q ";
  out.append(buf, end);
  out += " (0 ";
  write_node(t, nd.child[0], out);
  out += ") (1 ";
  write_node(t, nd.child[1], out);
  out += "))";
}

class TreeParser {
 public:
  TreeParser(std::string_view text, int n) : text_(text), n_(n), tree_(ParityDecisionTree::empty_arena(n)) {}

  ParityDecisionTree parse() {
    tree_.set_root(node());
    skip_ws();
    if (pos_ != text_.size()) fail("trailing content");
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("tree: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view token() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected a token");
    return text_.substr(start, pos_ - start);
  }

  std::int32_t node() {
    expect('(');
    const auto head = token();
    if (head == "leaf") {
      const auto v = token();
      int label;
      if (v == "-1") label = -1;
      else if (v == "1") label = 1;
      else fail("leaf label must be -1 or 1");
      expect(')');
      return tree_.add_leaf(label);
    }
    if (head != "q") fail("expected 'q' or 'leaf'");
    const auto hex = token();
    std::uint64_t mask = 0;
    auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), mask, 16);
    if (ec != std::errc{} || ptr != hex.data() + hex.size()) fail("bad mask '" + std::string(hex) + "'");
    if (mask == 0) fail("query mask must be nonzero");
    if (!ParityMask{mask}.fits(n_)) fail("mask exceeds " + std::to_string(n_) + " variables");
    std::int32_t child[2];
    for (int b = 0; b < 2; ++b) {
      expect('(');
      if (token() != (b == 0 ? "0" : "1")) fail("expected branch label " + std::to_string(b));
      child[b] = node();
      expect(')');
    }
    expect(')');
    return tree_.add_query(ParityMask{mask}, child[0], child[1]);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int n_;
  ParityDecisionTree tree_;
};

}  // namespace

std::string write_tree(const ParityDecisionTree& t) {
  std::string out;
  write_node(t, t.root(), out);
  out += '\n';
  return out;
}

ParityDecisionTree read_tree(std::string_view text, int n) { return TreeParser(text, n).parse(); }

ParityDecisionTree load_tree(const std::string& path, int n) { return read_tree(read_file(path), n); }

namespace {

void verify_exhaustive(const ParityDecisionTree& t, int n, const PointFunction& f, VerifyReport& rep) {
  const std::uint64_t size = std::uint64_t{1} << n;
  for (Assignment x = 0; x < size; ++x) {
    ++rep.points_checked;
    if (eval_tree(t, x) != f(x)) {
      rep.pass = false;
      rep.witness = x;
      return;
    }
  }
}

std::uint64_t count_leaves(const ParityDecisionTree& t, std::int32_t id) {
  const auto& nd = t.node(id);
  return nd.is_leaf() ? 1 : count_leaves(t, nd.child[0]) + count_leaves(t, nd.child[1]);
}

void verify_leafwise(const ParityDecisionTree& t, std::int32_t id, const Coset& c, const PointFunction& f,
                     VerifyReport& rep) {
  if (!rep.pass) return;
  const auto& nd = t.node(id);
  if (nd.is_leaf()) {
    c.for_each_point([&](Assignment x) {
      ++rep.points_checked;
      if (f(x) != nd.label) {
        rep.pass = false;
        rep.witness = x;
        return false;
      }
      return true;
    });
    return;
  }
  const int forced = c.forced_value(nd.query);
  for (int b = 0; b < 2; ++b) {
    if (forced >= 0 && forced != b) {
      rep.infeasible_leaves += count_leaves(t, nd.child[b]);
      continue;
    }
    verify_leafwise(t, nd.child[b], forced >= 0 ? c : c.with(nd.query, b), f, rep);
  }
}

}  // namespace

VerifyReport verify_tree(const ParityDecisionTree& t, int n, const PointFunction& f, VerifyMode mode) {
  if (t.num_vars() != n) throw Error("tree and function disagree on the variable count");
  VerifyReport rep;
  if (mode == VerifyMode::Exhaustive) verify_exhaustive(t, n, f, rep);
  else verify_leafwise(t, t.root(), Coset(n), f, rep);
  return rep;
}

VerifyReport verify_tree(const ParityDecisionTree& t, const BooleanFunction& f, VerifyMode mode) {
  return verify_tree(t, f.num_vars(), [&f](Assignment x) { return f(x); }, mode);
}

RunResult run_strategy(const Strategy& s, QueryOracle& oracle) {
  RunResult r;
  auto session = s.start();
  for (;;) {
    const Action a = session->next();
    if (const auto* out = std::get_if<Output>(&a)) {
      r.output = out->value;
      return r;
    }
    if (r.queries >= s.budget()) throw BudgetExceeded(s.name() + " exceeded its budget of " + std::to_string(s.budget()));
    const ParityMask q = std::get<Query>(a).mask;
    const int bit = oracle.ask(q);
    ++r.queries;
    r.transcript.push_back({q, bit});
    session->answer(bit);
  }
}

RunResult run_strategy(const Strategy& s, Assignment x) {
  QueryOracle o(x);
  return run_strategy(s, o);
}

namespace {

struct Materializer {
  const Strategy& strategy;
  ParityDecisionTree tree;
  std::vector<QueryStep> path;

  Action replay_action() const {
    auto fresh = strategy.start();
    for (const auto& st : path) fresh->answer(st.answer);
    return fresh->next();
  }

  std::int32_t build(StrategySession& session, const Coset& c, int charged) {
    const Action a = session.next();
    if (const auto* out = std::get_if<Output>(&a)) {
      const Action again = replay_action();
      const auto* out2 = std::get_if<Output>(&again);
      if (!out2 || out2->value != out->value) throw Error(strategy.name() + " is not deterministic in its transcript");
      return tree.add_leaf(out->value);
    }
    if (charged >= strategy.budget())
      throw BudgetExceeded(strategy.name() + " exceeded its budget of " + std::to_string(strategy.budget()));
    const ParityMask q = std::get<Query>(a).mask;
    const int forced = c.forced_value(q);
    if (forced >= 0) {
      path.push_back({q, forced});
      session.answer(forced);
      const auto id = build(session, c, charged + 1);
      path.pop_back();
      return id;
    }
    std::int32_t child[2];
    for (int b = 0; b < 2; ++b) {
      auto branch = session.clone();
      path.push_back({q, b});
      branch->answer(b);
      child[b] = build(*branch, c.with(q, b), charged + 1);
      path.pop_back();
    }
    return tree.add_query(q, child[0], child[1]);
  }
};

}  // namespace

ParityDecisionTree materialize(const Strategy& s) {
  Materializer m{s, ParityDecisionTree::empty_arena(s.num_vars()), {}};
  auto session = s.start();
  m.tree.set_root(m.build(*session, Coset(s.num_vars()), 0));
  return std::move(m.tree);
}

namespace {

// Incremental GF(2) basis keyed by highest set bit; no allocation.
struct XorBasis {
  std::array<std::uint64_t, 64> rows{};
  bool add(std::uint64_t v) {
    while (v) {
      const int top = 63 - std::countl_zero(v);
      if (!rows[top]) {
        rows[top] = v;
        return true;
      }
      v ^= rows[top];
    }
    return false;
  }
};

void simulate_range(const Strategy& s, const PointFunction& f, Assignment lo, Assignment hi, SimulationReport& rep) {
  for (Assignment x = lo; x < hi; ++x) {
    auto session = s.start();
    XorBasis basis;
    int queries = 0;
    for (;;) {
      const Action a = session->next();
      if (const auto* out = std::get_if<Output>(&a)) {
        if (out->value != f(x) && rep.correct) {
          rep.correct = false;
          rep.witness = x;
        }
        break;
      }
      if (queries >= s.budget()) throw BudgetExceeded(s.name() + " exceeded its budget on input " + std::to_string(x));
      const ParityMask q = std::get<Query>(a).mask;
      if (!basis.add(q.bits)) rep.dependent_query = true;
      ++queries;
      session->answer(q.apply(x));
    }
    rep.worst_case = std::max(rep.worst_case, queries);
    ++rep.inputs;
  }
}

}  // namespace

SimulationReport simulate_all(const Strategy& s, const PointFunction& f, int threads) {
  const int n = s.num_vars();
  if (n > 40) throw Error("exhaustive simulation over " + std::to_string(n) + " variables is not supported");
  const Assignment size = Assignment{1} << n;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<Assignment>(size, 64))));
  std::vector<SimulationReport> parts(threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int i = 0; i < threads; ++i) {
    const Assignment lo = size * i / threads;
    const Assignment hi = size * (i + 1) / threads;
    auto work = [&, i, lo, hi] {
      try {
        simulate_range(s, f, lo, hi, parts[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    if (threads == 1) work();
    else pool.emplace_back(work);
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  SimulationReport rep;
  for (const auto& p : parts) {
    if (!p.correct && rep.correct) {
      rep.correct = false;
      rep.witness = p.witness;
    }
    rep.worst_case = std::max(rep.worst_case, p.worst_case);
    rep.inputs += p.inputs;
    rep.dependent_query = rep.dependent_query || p.dependent_query;
  }
  return rep;
}

namespace {

class TreeSession final : public StrategySession {
 public:
  explicit TreeSession(std::shared_ptr<const ParityDecisionTree> t) : tree_(std::move(t)), at_(tree_->root()) {}

  Action next() const override {
    const auto& nd = tree_->node(at_);
    if (nd.is_leaf()) return Output{nd.label};
    return Query{nd.query};
  }
  void answer(int bit) override { at_ = tree_->node(at_).child[bit]; }
  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<TreeSession>(*this); }

 private:
  std::shared_ptr<const ParityDecisionTree> tree_;
  std::int32_t at_;
};

class TreeStrategy final : public Strategy {
 public:
  TreeStrategy(ParityDecisionTree t, std::string name)
      : tree_(std::make_shared<const ParityDecisionTree>(std::move(t))), depth_(tree_->depth()), name_(std::move(name)) {}

  int num_vars() const override { return tree_->num_vars(); }
  int budget() const override { return depth_; }
  std::string name() const override { return name_; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<TreeSession>(tree_); }

 private:
  std::shared_ptr<const ParityDecisionTree> tree_;
  int depth_;
  std::string name_;
};

}  // namespace

std::unique_ptr<Strategy> tree_strategy(ParityDecisionTree t, std::string name) {
  return std::make_unique<TreeStrategy>(std::move(t), std::move(name));
}

}  // namespace pdtlab
