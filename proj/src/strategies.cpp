#include "pdtlab/strategies.hpp"

#include <algorithm>
#include <optional>

namespace pdtlab {

BlockState BlockState::singletons(int n) {
  BlockState s;
  for (int i = 1; i <= n; ++i) s.blocks.push_back(Block{std::uint64_t{1} << (i - 1), false});
  return s;
}

int BlockState::block_of(int var) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if ((blocks[i].members >> (var - 1)) & 1U) return static_cast<int>(i);
  throw Error("variable " + std::to_string(var) + " is not in any block");
}

void BlockState::merge(int a, int b, int parity) {
  const int ia = block_of(a);
  const int ib = block_of(b);
  if (ia == ib) throw Error("cannot merge a block with itself");
  if (blocks[ia].balanced || blocks[ib].balanced) throw Error("only all-equal blocks can be merged");
  if (blocks[ia].size() != blocks[ib].size()) throw Error("merged blocks must have equal size");
  blocks[std::min(ia, ib)] = Block{blocks[ia].members | blocks[ib].members, parity == 1};
  blocks.erase(blocks.begin() + std::max(ia, ib));
}

namespace {

int truth(bool v) { return v ? -1 : 1; }

// ---------------------------------------------------------------- majority

class MajSession final : public BlockSession {
 public:
  explicit MajSession(int n) : n_(n), state_(BlockState::singletons(n)) {}

  Action next() const override {
    if (final_bit_) return Output{truth(*final_bit_ == 1)};
    if (auto pair = mergeable())
      return Query{ParityMask::variable(state_.blocks[pair->first].rep()) ^
                   ParityMask::variable(state_.blocks[pair->second].rep())};
    const int big = largest_equal();
    if (big < 0) return Output{-1};  // balanced input, n even
    return Query{ParityMask::variable(state_.blocks[big].rep())};
  }

  void answer(int bit) override {
    if (auto pair = mergeable()) {
      state_.merge(state_.blocks[pair->first].rep(), state_.blocks[pair->second].rep(), bit);
      return;
    }
    final_bit_ = bit;
  }

  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<MajSession>(*this); }
  const BlockState& state() const override { return state_; }

 private:
  // Two smallest equal-size all-equal blocks, lowest representatives first.
  std::optional<std::pair<int, int>> mergeable() const {
    std::optional<std::pair<int, int>> best;
    int best_size = 0;
    const auto& bl = state_.blocks;
    for (std::size_t i = 0; i < bl.size(); ++i) {
      if (bl[i].balanced) continue;
      for (std::size_t j = i + 1; j < bl.size(); ++j) {
        if (bl[j].balanced || bl[j].size() != bl[i].size()) continue;
        if (!best || bl[i].size() < best_size) {
          best = {static_cast<int>(i), static_cast<int>(j)};
          best_size = bl[i].size();
        }
        break;
      }
    }
    return best;
  }

  int largest_equal() const {
    int best = -1;
    for (std::size_t i = 0; i < state_.blocks.size(); ++i)
      if (!state_.blocks[i].balanced && (best < 0 || state_.blocks[i].size() > state_.blocks[best].size()))
        best = static_cast<int>(i);
    return best;
  }

  int n_;
  BlockState state_;
  std::optional<int> final_bit_;
};

class MajStrategy final : public Strategy {
 public:
  explicit MajStrategy(int n) : n_(n) {
    if (n < 1 || n > kMaxMaskVars) throw Error("maj strategy needs 1 <= n <= " + std::to_string(kMaxMaskVars));
  }
  int num_vars() const override { return n_; }
  int budget() const override { return n_ - ones_in_binary(n_) + 1; }
  std::string name() const override { return "maj:" + std::to_string(n_); }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<MajSession>(n_); }

 private:
  int n_;
};

// --------------------------------------------------------------- thresholds

// Follows a fixed merge plan over pairs of representatives. Once a balanced
// block is known (and `stop_on_balanced` is set, or the plan is finished)
// one variable of each remaining all-equal block is read, which pins the
// input weight. If the plan finishes with every block all-equal, only the
// complete groups of size `group` are read; the leftover variables cannot
// reach the threshold by themselves.
struct ThresholdPlan {
  int n = 0;
  int k = 0;
  int group = 0;
  bool stop_on_balanced = false;
  std::vector<std::pair<int, int>> merges;
};

class ThresholdSession final : public BlockSession {
 public:
  explicit ThresholdSession(std::shared_ptr<const ThresholdPlan> plan)
      : plan_(std::move(plan)), state_(BlockState::singletons(plan_->n)) {}

  Action next() const override {
    if (step_ < plan_->merges.size() && !(plan_->stop_on_balanced && any_balanced())) {
      const auto [a, b] = plan_->merges[step_];
      return Query{ParityMask::variable(a) ^ ParityMask::variable(b)};
    }
    const auto reads = to_read();
    if (read_ < reads.size()) return Query{ParityMask::variable(state_.blocks[reads[read_]].rep())};
    int weight = 0;
    for (const auto& b : state_.blocks)
      if (b.balanced) weight += b.size() / 2;
    for (std::size_t i = 0; i < reads.size(); ++i) weight += read_bits_[i] * state_.blocks[reads[i]].size();
    return Output{truth(weight >= plan_->k)};
  }

  void answer(int bit) override {
    if (step_ < plan_->merges.size() && !(plan_->stop_on_balanced && any_balanced())) {
      const auto [a, b] = plan_->merges[step_++];
      state_.merge(a, b, bit);
      return;
    }
    read_bits_.push_back(bit);
    ++read_;
  }

  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<ThresholdSession>(*this); }
  const BlockState& state() const override { return state_; }

 private:
  bool any_balanced() const {
    return std::any_of(state_.blocks.begin(), state_.blocks.end(), [](const Block& b) { return b.balanced; });
  }

  std::vector<std::size_t> to_read() const {
    const bool exact = any_balanced();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < state_.blocks.size(); ++i) {
      const auto& b = state_.blocks[i];
      if (b.balanced) continue;
      if (exact || b.size() == plan_->group) out.push_back(i);
    }
    return out;
  }

  std::shared_ptr<const ThresholdPlan> plan_;
  BlockState state_;
  std::size_t step_ = 0;
  std::size_t read_ = 0;
  std::vector<int> read_bits_;
};

class ThresholdStrategy final : public Strategy {
 public:
  ThresholdStrategy(ThresholdPlan plan, std::string name)
      : plan_(std::make_shared<const ThresholdPlan>(std::move(plan))), name_(std::move(name)) {}
  int num_vars() const override { return plan_->n; }
  int budget() const override { return plan_->n - 1; }
  std::string name() const override { return name_; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<ThresholdSession>(plan_); }

 private:
  std::shared_ptr<const ThresholdPlan> plan_;
  std::string name_;
};

}  // namespace

std::unique_ptr<Strategy> maj_strategy(int n) { return std::make_unique<MajStrategy>(n); }

std::unique_ptr<Strategy> thr2_strategy(int n) {
  if (n < 3 || n % 2 == 0 || n > kMaxMaskVars) throw Error("thr2 strategy needs odd n >= 3");
  ThresholdPlan plan{n, 2, 2, false, {}};
  for (int i = 1; i + 1 < n; i += 2) plan.merges.emplace_back(i, i + 1);
  return std::make_unique<ThresholdStrategy>(std::move(plan), "thr2:" + std::to_string(n));
}

std::unique_ptr<Strategy> thr3_strategy(int n) {
  if (n < 6 || n % 4 != 2 || n > kMaxMaskVars) throw Error("thr3 strategy needs n = 2 (mod 4) and n >= 6");
  ThresholdPlan plan{n, 3, 4, true, {}};
  for (int a = 1; a + 3 <= n - 2; a += 4) {
    plan.merges.emplace_back(a, a + 1);
    plan.merges.emplace_back(a + 2, a + 3);
    plan.merges.emplace_back(a, a + 2);
  }
  return std::make_unique<ThresholdStrategy>(std::move(plan), "thr3:" + std::to_string(n));
}

// ------------------------------------------------------------ MAJ3 formulas

Maj3Tree Maj3Tree::complete(int depth) {
  if (depth < 1) throw Error("rmaj depth must be at least 1");
  Maj3Tree t;
  t.n = 1;
  for (int i = 0; i < depth; ++i) t.n *= 3;
  if (t.n > kMaxMaskVars) throw Error("rmaj depth too large for 64-bit masks");
  // Level 1 gates over consecutive variable triples, then gates over
  // consecutive gate triples.
  std::vector<int> layer;
  for (int v = 1; v <= t.n; ++v) layer.push_back(v);
  while (layer.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i < layer.size(); i += 3) {
      t.gates.push_back(Gate{{layer[i], layer[i + 1], layer[i + 2]}});
      next.push_back(-static_cast<int>(t.gates.size()));
    }
    layer = std::move(next);
  }
  t.root = static_cast<int>(t.gates.size()) - 1;
  return t;
}

void Maj3Tree::validate() const {
  if (gates.empty()) throw Error("MAJ3 formula has no gates");
  if (n < 1 || n > kMaxMaskVars) throw Error("MAJ3 formula variable count out of range");
  std::vector<int> var_uses(n + 1, 0);
  std::vector<int> gate_uses(gates.size(), 0);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    for (int in : gates[g].in) {
      if (in > 0) {
        if (in > n) throw Error("MAJ3 formula references variable beyond n");
        ++var_uses[in];
      } else {
        const int ref = -in - 1;
        if (ref < 0 || static_cast<std::size_t>(ref) >= g) throw Error("MAJ3 gate references a later gate");
        ++gate_uses[ref];
      }
    }
  }
  for (int v = 1; v <= n; ++v)
    if (var_uses[v] != 1) throw Error("variable x" + std::to_string(v) + " must feed exactly one gate");
  for (std::size_t g = 0; g < gates.size(); ++g)
    if (gate_uses[g] != (static_cast<int>(g) == root ? 0 : 1)) throw Error("MAJ3 formula must be a tree");
}

int Maj3Tree::eval(Assignment x) const {
  std::vector<int> val(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) {
    int ones = 0;
    for (int in : gates[g].in) ones += in > 0 ? static_cast<int>((x >> (in - 1)) & 1U) : val[-in - 1];
    val[g] = ones >= 2;
  }
  return truth(val[root] == 1);
}

namespace {

struct Maj3Plan {
  Maj3Tree shape;
  std::vector<int> order;  // gate indices, deepest first, then left to right
};

class Maj3Session final : public StrategySession {
 public:
  explicit Maj3Session(std::shared_ptr<const Maj3Plan> plan)
      : plan_(std::move(plan)), resolved_(plan_->shape.gates.size(), 0) {}

  Action next() const override {
    if (final_bit_) return Output{truth(*final_bit_ == 1)};
    if (step_ < plan_->order.size()) {
      const auto in = inputs(plan_->order[step_]);
      return Query{ParityMask::variable(in[0]) ^ ParityMask::variable(in[1])};
    }
    return Query{ParityMask::variable(resolved_[plan_->shape.root])};
  }

  void answer(int bit) override {
    if (step_ < plan_->order.size()) {
      const int g = plan_->order[step_++];
      const auto in = inputs(g);
      // y == z gives MAJ3 = y, otherwise MAJ3 = t.
      resolved_[g] = bit == 0 ? in[0] : in[2];
      return;
    }
    final_bit_ = bit;
  }

  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<Maj3Session>(*this); }

 private:
  std::array<int, 3> inputs(int g) const {
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) {
      const int in = plan_->shape.gates[g].in[i];
      out[i] = in > 0 ? in : resolved_[-in - 1];
    }
    return out;
  }

  std::shared_ptr<const Maj3Plan> plan_;
  std::vector<int> resolved_;  // variable standing in for each processed gate
  std::size_t step_ = 0;
  std::optional<int> final_bit_;
};

class Maj3Strategy final : public Strategy {
 public:
  Maj3Strategy(std::shared_ptr<const Maj3Plan> plan, std::string name) : plan_(std::move(plan)), name_(std::move(name)) {}
  int num_vars() const override { return plan_->shape.n; }
  int budget() const override { return plan_->shape.internal_count() + 1; }
  std::string name() const override { return name_; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<Maj3Session>(plan_); }

 private:
  std::shared_ptr<const Maj3Plan> plan_;
  std::string name_;
};

std::shared_ptr<const Maj3Plan> plan_for(Maj3Tree shape) {
  shape.validate();
  const auto count = shape.gates.size();
  std::vector<int> depth(count, 0);
  std::vector<int> position(count, 0);
  // Depth and left-to-right position via a preorder walk from the root.
  int counter = 0;
  std::function<void(int, int)> walk = [&](int g, int d) {
    depth[g] = d;
    position[g] = counter++;
    for (int in : shape.gates[g].in)
      if (in < 0) walk(-in - 1, d + 1);
  };
  walk(shape.root, 0);
  std::vector<int> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth[a] != depth[b]) return depth[a] > depth[b];
    return position[a] < position[b];
  });
  return std::make_shared<const Maj3Plan>(Maj3Plan{std::move(shape), std::move(order)});
}

}  // namespace

std::unique_ptr<Strategy> maj3tree_strategy(Maj3Tree shape) {
  return std::make_unique<Maj3Strategy>(plan_for(std::move(shape)), "maj3tree");
}

std::unique_ptr<Strategy> rmaj_strategy(int depth) {
  return std::make_unique<Maj3Strategy>(plan_for(Maj3Tree::complete(depth)), "rmaj:" + std::to_string(depth));
}

}  // namespace pdtlab
