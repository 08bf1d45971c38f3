#include <numeric>

#include "pdtlab/strategies.hpp"

namespace pdtlab {

namespace {

// Roles a tree wire can play: x_1..x_n are 1..n, y is n+1, not-y is n+2.
struct ReduceContext {
  std::shared_ptr<const ParityDecisionTree> tree;
  int n = 0;
  int k = 0;
  int budget = 0;
};

class ReduceSession final : public StrategySession {
 public:
  explicit ReduceSession(std::shared_ptr<const ReduceContext> ctx)
      : ctx_(std::move(ctx)), role_(ctx_->n + 2), asked_(ctx_->n), at_(ctx_->tree->root()) {
    std::iota(role_.begin(), role_.end(), 1);
    advance();
  }

  Action next() const override {
    const auto& nd = ctx_->tree->node(at_);
    if (nd.is_leaf()) return Output{nd.label};
    return Query{pending_mask_};
  }

  void answer(int bit) override {
    asked_ = asked_.with(pending_mask_, bit);
    descend(bit ^ pending_const_);
    advance();
  }

  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<ReduceSession>(*this); }

 private:
  int y_role() const { return ctx_->n + 1; }
  int not_y_role() const { return ctx_->n + 2; }

  int wire_with_role(int role) const {
    for (std::size_t w = 0; w < role_.size(); ++w)
      if (role_[w] == role) return static_cast<int>(w);
    throw Error("role lost during renaming");
  }

  struct Split {
    std::uint64_t x = 0;
    bool y = false;
    bool not_y = false;
  };

  Split split(ParityMask q) const {
    Split s;
    for (std::size_t w = 0; w < role_.size(); ++w) {
      if (!((q.bits >> w) & 1U)) continue;
      const int r = role_[w];
      if (r == y_role()) s.y = true;
      else if (r == not_y_role()) s.not_y = true;
      else s.x |= std::uint64_t{1} << (r - 1);
    }
    return s;
  }

  void descend(int branch) { at_ = ctx_->tree->node(at_).child[branch]; }

  // Moves through every query whose answer is already known, stopping at a
  // leaf or at a query that must go to the oracle.
  void advance() {
    const std::uint64_t all_wires = ParityMask::all(ctx_->n + 2).bits;
    for (;;) {
      const auto& nd = ctx_->tree->node(at_);
      if (nd.is_leaf()) return;
      std::uint64_t x_mask;
      int constant;
      if (!y_fixed_ && nd.query.bits == all_wires) {
        // y and not-y cancel to the constant 1.
        x_mask = ParityMask::all(ctx_->n).bits;
        constant = 1;
      } else if (!y_fixed_) {
        rename_for(nd.query);
        y_mask_ = split(nd.query).x;
        y_fixed_ = true;
        descend(0);  // y was chosen to make this parity 0
        continue;
      } else {
        const Split s = split(nd.query);
        x_mask = s.x ^ (s.y ? y_mask_ : 0) ^ (s.not_y ? y_mask_ : 0);
        constant = s.not_y ? 1 : 0;
      }
      if (x_mask == 0) {
        descend(constant);
        continue;
      }
      const int forced = asked_.forced_value(ParityMask{x_mask});
      if (forced >= 0) {
        descend(forced ^ constant);
        continue;
      }
      pending_mask_ = ParityMask{x_mask};
      pending_const_ = constant;
      return;
    }
  }

  // Permutes wire roles so that q contains y and not not-y. Valid because
  // THR is symmetric, so the permuted tree computes the same function.
  void rename_for(ParityMask q) {
    const Split s = split(q);
    const int wy = wire_with_role(y_role());
    const int wny = wire_with_role(not_y_role());
    if (s.y && !s.not_y) return;
    if (s.not_y && !s.y) {
      std::swap(role_[wy], role_[wny]);
      return;
    }
    if (!s.y) {
      const int w = std::countr_zero(q.bits);
      std::swap(role_[w], role_[wy]);
      return;
    }
    const std::uint64_t outside = ParityMask::all(ctx_->n + 2).bits & ~q.bits;
    const int w = std::countr_zero(outside);
    std::swap(role_[w], role_[wny]);
  }

  std::shared_ptr<const ReduceContext> ctx_;
  std::vector<int> role_;  // role_[wire] for wires 0..n+1
  Coset asked_;
  std::int32_t at_;
  bool y_fixed_ = false;
  std::uint64_t y_mask_ = 0;
  ParityMask pending_mask_;
  int pending_const_ = 0;
};

class ReduceStrategy final : public Strategy {
 public:
  explicit ReduceStrategy(std::shared_ptr<const ReduceContext> ctx) : ctx_(std::move(ctx)) {}
  int num_vars() const override { return ctx_->n; }
  int budget() const override { return ctx_->budget; }
  std::string name() const override { return "reduce-thr:" + std::to_string(ctx_->n) + "," + std::to_string(ctx_->k); }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<ReduceSession>(ctx_); }

 private:
  std::shared_ptr<const ReduceContext> ctx_;
};

}  // namespace

std::unique_ptr<Strategy> thr_reduce(const ParityDecisionTree& t, int n, int k) {
  if (n < 1 || n + 2 > kMaxMaskVars) throw Error("thr_reduce: n out of range");
  if (t.num_vars() != n + 2) throw Error("thr_reduce: tree must be over n + 2 = " + std::to_string(n + 2) + " variables");
  const int depth = t.depth();
  if (depth < 1) throw Error("thr_reduce: tree must make at least one query");
  const int target = k + 1;
  const auto rep = verify_tree(
      t, n + 2, [target](Assignment x) { return std::popcount(x) >= target ? -1 : 1; }, VerifyMode::LeafWise);
  if (!rep.pass) throw Error("thr_reduce: tree does not compute THR_" + std::to_string(n + 2) + "^" + std::to_string(target));
  auto ctx = std::make_shared<ReduceContext>();
  ctx->tree = std::make_shared<const ParityDecisionTree>(t);
  ctx->n = n;
  ctx->k = k;
  ctx->budget = depth - 1;
  return std::make_unique<ReduceStrategy>(std::move(ctx));
}

}  // namespace pdtlab
