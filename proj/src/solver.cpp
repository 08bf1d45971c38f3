#include "pdtlab/solver.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "pdtlab/coset.hpp"
#include "pdtlab/spectral.hpp"

namespace pdtlab {

BoundProfile bound_profile(const BooleanFunction& f, bool with_certificate) {
  BoundProfile b;
  const Spectrum s = wht(f);
  b.spar = sparsity(s);
  b.gran = granularity(s);
  b.deg2 = deg2(f);
  b.sparsity_bound = sparsity_lower_bound(b.spar);
  b.deg2_bound = b.deg2;
  b.gran_bound = f.is_constant() ? 0 : b.gran + 1;
  b.best_lower = std::max({b.sparsity_bound, b.deg2_bound, b.gran_bound});
  if (with_certificate) {
    const auto cert = parity_certificate(f);
    b.cert_bound = cert.value;
    b.best_lower = std::max(b.best_lower, cert.value);
  }
  return b;
}

namespace {

int static_lower_bound(const BooleanFunction& g) {
  if (g.is_constant()) return 0;
  const Spectrum s = wht(g);
  return std::max({granularity(s) + 1, deg2(g), sparsity_lower_bound(sparsity(s))});
}

struct Key {
  int n;
  std::vector<std::uint64_t> words;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.n);
    for (auto w : k.words) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

Key key_of(const BooleanFunction& g) { return Key{g.num_vars(), {g.words().begin(), g.words().end()}}; }

struct Entry {
  int static_lb = 0;
  int lower = 0;
  bool exact = false;
  std::uint64_t best_query = 0;  // valid when exact and nonconstant
};

// Concurrent idempotent cache: entries only ever tighten.
class Memo {
 public:
  std::optional<Entry> get(const Key& k) {
    std::lock_guard lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void put(const Key& k, const Entry& e) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = map_.try_emplace(k, e);
    if (inserted) return;
    Entry& cur = it->second;
    if (cur.exact) return;
    if (e.exact) cur = e;
    else cur.lower = std::max(cur.lower, e.lower);
  }

 private:
  std::mutex mu_;
  std::unordered_map<Key, Entry, KeyHash> map_;
};

struct Aborted {};

struct Candidate {
  std::uint64_t q;
  BooleanFunction child[2];
  int lb[2];
  int bound() const { return 1 + std::max(lb[0], lb[1]); }
};

class Searcher {
 public:
  Searcher(const SolveOptions& opt, Memo& memo, std::atomic<std::uint64_t>& nodes, std::atomic<std::uint64_t>& hits,
           std::chrono::steady_clock::time_point deadline)
      : opt_(opt), memo_(memo), nodes_(nodes), hits_(hits), deadline_(deadline) {}

  int lower_bound(const BooleanFunction& g) {
    if (g.is_constant()) return 0;
    if (!opt_.use_bounds) return 1;
    if (opt_.memoize) {
      const Key k = key_of(g);
      if (auto e = memo_.get(k)) return std::max(e->static_lb, e->lower);
      const int lb = static_lower_bound(g);
      memo_.put(k, Entry{lb, lb, false, 0});
      return lb;
    }
    return static_lower_bound(g);
  }

  std::vector<Candidate> candidates(const BooleanFunction& g) {
    const std::uint64_t count = std::uint64_t{1} << g.num_vars();
    std::vector<Candidate> out;
    out.reserve(count - 1);
    for (std::uint64_t q = 1; q < count; ++q) {
      Candidate c{q, {restrict(g, ParityMask{q}, 0).g, restrict(g, ParityMask{q}, 1).g}, {0, 0}};
      if (c.child[1].count_true() < c.child[0].count_true()) {
        std::swap(c.child[0], c.child[1]);
      }
      c.lb[0] = lower_bound(c.child[0]);
      c.lb[1] = lower_bound(c.child[1]);
      out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.bound() < b.bound(); });
    return out;
  }

  void tick() {
    const auto n = ++nodes_;
    if (opt_.node_budget && n > opt_.node_budget) throw Aborted{};
    if (opt_.time_budget.count() && (n & 255) == 0 && std::chrono::steady_clock::now() > deadline_) throw Aborted{};
  }

  /// D(g) if D(g) <= limit, otherwise some proven lower bound > limit.
  int solve(const BooleanFunction& g, int limit) {
    if (g.is_constant()) return 0;
    Entry e;
    Key k;
    if (opt_.memoize) {
      k = key_of(g);
      if (auto found = memo_.get(k)) {
        if (found->exact || found->lower > limit) {
          ++hits_;
          return found->lower;
        }
        e = *found;
      } else {
        e.static_lb = e.lower = opt_.use_bounds ? static_lower_bound(g) : 1;
      }
    } else {
      e.static_lb = e.lower = opt_.use_bounds ? static_lower_bound(g) : 1;
    }
    if (e.lower > limit) return e.lower;
    tick();

    int best = limit + 1;
    std::uint64_t best_q = 0;
    for (auto& c : candidates(g)) {
      if (c.bound() >= best) break;  // sorted by bound
      const int va = solve(c.child[0], best - 2);
      if (1 + va >= best) continue;
      const int vb = solve(c.child[1], best - 2);
      if (1 + vb >= best) continue;
      best = 1 + std::max(va, vb);
      best_q = c.q;
      if (best <= e.lower) break;
    }
    if (best <= limit) {
      e.lower = best;
      e.exact = true;
      e.best_query = best_q;
    } else {
      e.lower = std::max(e.lower, limit + 1);
    }
    if (opt_.memoize) memo_.put(k, e);
    return e.lower;
  }

  /// Tree of depth D(g) for g; g must already be solved exactly when the
  /// memo is enabled.
  ParityDecisionTree witness(const BooleanFunction& g) {
    if (g.is_constant()) return ParityDecisionTree::leaf(g.num_vars(), g(0));
    const int depth = solve(g, g.num_vars());
    std::uint64_t q = 0;
    if (opt_.memoize) {
      if (auto e = memo_.get(key_of(g)); e && e->exact) q = e->best_query;
    }
    if (q == 0) {
      for (auto& c : candidates(g)) {
        if (solve(c.child[0], depth - 1) <= depth - 1 && solve(c.child[1], depth - 1) <= depth - 1) {
          q = c.q;
          break;
        }
      }
    }
    if (q == 0) throw Error("witness reconstruction failed");
    ParityDecisionTree sub[2];
    for (int b = 0; b < 2; ++b) {
      auto r = restrict(g, ParityMask{q}, b);
      sub[b] = witness(r.g).map_queries(g.num_vars(), [&r](ParityMask m) { return r.param.push_parity(m); });
    }
    return ParityDecisionTree::query(ParityMask{q}, sub[0], sub[1]);
  }

 private:
  const SolveOptions& opt_;
  Memo& memo_;
  std::atomic<std::uint64_t>& nodes_;
  std::atomic<std::uint64_t>& hits_;
  std::chrono::steady_clock::time_point deadline_;
};

ParityDecisionTree greedy_from(const BooleanFunction& g) {
  if (g.is_constant()) return ParityDecisionTree::leaf(g.num_vars(), g(0));
  const std::uint64_t count = std::uint64_t{1} << g.num_vars();
  std::uint64_t best_q = 0;
  std::pair<int, int> best_score{1 << 30, 1 << 30};
  for (std::uint64_t q = 1; q < count; ++q) {
    const int a = static_lower_bound(restrict(g, ParityMask{q}, 0).g);
    const int b = static_lower_bound(restrict(g, ParityMask{q}, 1).g);
    const std::pair<int, int> score{std::max(a, b), a + b};
    if (score < best_score) {
      best_score = score;
      best_q = q;
    }
  }
  ParityDecisionTree sub[2];
  for (int b = 0; b < 2; ++b) {
    auto r = restrict(g, ParityMask{best_q}, b);
    sub[b] = greedy_from(r.g).map_queries(g.num_vars(), [&r](ParityMask m) { return r.param.push_parity(m); });
  }
  return ParityDecisionTree::query(ParityMask{best_q}, sub[0], sub[1]);
}

}  // namespace

ParityDecisionTree greedy_tree(const BooleanFunction& f) { return greedy_from(f); }

ParityDecisionTree variable_tree(const BooleanFunction& f) {
  ParityDecisionTree t = ParityDecisionTree::empty_arena(f.num_vars());
  std::function<std::int32_t(const Coset&, int)> build = [&](const Coset& c, int var) -> std::int32_t {
    int first = 0;
    bool constant = true;
    bool seen = false;
    c.for_each_point([&](Assignment x) {
      if (!seen) {
        first = f(x);
        seen = true;
      } else if (f(x) != first) {
        constant = false;
        return false;
      }
      return true;
    });
    if (constant) return t.add_leaf(first);
    const ParityMask q = ParityMask::variable(var);
    const auto z = build(c.with(q, 0), var + 1);
    const auto o = build(c.with(q, 1), var + 1);
    return t.add_query(q, z, o);
  };
  t.set_root(build(Coset(f.num_vars()), 1));
  return t;
}

SolveReport exact_depth(const BooleanFunction& f, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.bounds = bound_profile(f);
  const int n = f.num_vars();

  ParityDecisionTree incumbent = options.incumbent ? *options.incumbent : greedy_tree(f);
  if (options.incumbent) {
    if (incumbent.num_vars() != n || !verify_tree(incumbent, f).pass)
      throw Error("incumbent tree does not compute the function");
    const auto greedy = greedy_tree(f);
    if (greedy.depth() < incumbent.depth()) incumbent = greedy;
  }
  rep.upper = incumbent.depth();
  rep.lower = rep.bounds.best_lower;
  rep.bounds.upper = rep.upper;

  Memo memo;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> hits{0};
  const auto deadline = start + options.time_budget;
  auto finish = [&] {
    rep.nodes_expanded = nodes.load();
    rep.memo_hits = hits.load();
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
  };

  if (rep.lower >= rep.upper) {
    rep.exact = true;
    rep.depth = rep.upper;
    rep.witness = std::move(incumbent);
    return finish();
  }

  Searcher root(options, memo, nodes, hits, deadline);
  try {
    int value;
    if (options.threads <= 1 || f.is_constant()) {
      value = root.solve(f, rep.upper - 1);
    } else {
      // Root-level split: each worker takes a strided share of the root
      // queries against a shared incumbent and shared memo.
      auto cands = root.candidates(f);
      std::atomic<int> best{rep.upper};
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(options.threads);
      std::mutex best_mu;
      for (int w = 0; w < options.threads; ++w) {
        pool.emplace_back([&, w] {
          try {
            Searcher s(options, memo, nodes, hits, deadline);
            for (std::size_t i = w; i < cands.size(); i += options.threads) {
              const auto& c = cands[i];
              const int cur = best.load();
              if (c.bound() >= cur) continue;
              const int va = s.solve(c.child[0], cur - 2);
              if (1 + va >= best.load()) continue;
              const int vb = s.solve(c.child[1], best.load() - 2);
              const int v = 1 + std::max(va, vb);
              std::lock_guard lock(best_mu);
              if (v < best.load()) best = v;
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      value = best.load() < rep.upper ? root.solve(f, best.load()) : rep.upper;
    }
    rep.exact = true;
    if (value < rep.upper) {
      rep.depth = value;
      rep.witness = root.witness(f);
    } else {
      rep.depth = rep.upper;
      rep.witness = std::move(incumbent);
    }
    rep.lower = rep.upper = rep.depth;
    rep.bounds.upper = rep.depth;
  } catch (const Aborted&) {
    rep.exact = false;
    if (auto e = memo.get(key_of(f))) rep.lower = std::max(rep.lower, e->lower);
    rep.witness = std::move(incumbent);
  }
  return finish();
}

Refutation adversary_refute(const BooleanFunction& f, const ParityDecisionTree& t) {
  Refutation r;
  if (f.is_constant()) return r;
  if (t.num_vars() != f.num_vars()) throw Error("tree and function disagree on the variable count");
  const Spectrum s = wht(f);
  const int gran = granularity(s);
  if (t.depth() > gran) return r;
  r.applicable = true;
  r.character = granularity_witness(s);
  const ParityMask chi{r.character};

  Coset c(f.num_vars());
  std::int32_t id = t.root();
  while (!t.node(id).is_leaf()) {
    const ParityMask q = t.node(id).query;
    std::int64_t sum[2] = {0, 0};
    c.for_each_point([&](Assignment x) {
      if (f.bit(x)) sum[q.apply(x)] += chi.chi(x);
      return true;
    });
    // Keep the side whose character sum has the smaller 2-adic valuation.
    const int b = nu2(sum[1]) < nu2(sum[0]) ? 1 : 0;
    r.path.push_back({q, b});
    c = c.with(q, b);
    id = t.node(id).child[b];
  }
  r.leaf_label = t.node(id).label;
  bool found = false;
  bool first_seen = false;
  c.for_each_point([&](Assignment x) {
    if (!first_seen) {
      r.first = r.second = x;
      first_seen = true;
      return true;
    }
    if (f(x) != f(r.first)) {
      r.second = x;
      found = true;
      return false;
    }
    return true;
  });
  if (!found && f(r.first) == r.leaf_label) throw Error("adversary reached a correct leaf; depth bound violated");
  return r;
}

namespace {

// Set of points of GF(2)^n as a bitset indexed by the point.
using PointSet = std::vector<std::uint64_t>;

// {w ^ u : w in s}
PointSet xor_shift(const PointSet& s, std::uint64_t u) {
  static constexpr std::uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
                                            0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL};
  PointSet out(s.size());
  const std::uint64_t hi = u >> 6;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::uint64_t w = s[i];
    for (int j = 0; j < 6; ++j) {
      if ((u >> j) & 1U) {
        const int sh = 1 << j;
        w = ((w & kLow[j]) << sh) | ((w >> sh) & kLow[j]);
      }
    }
    out[i ^ hi] = w;
  }
  return out;
}

std::uint64_t count(const PointSet& s) {
  std::uint64_t c = 0;
  for (auto w : s) c += std::popcount(w);
  return c;
}

int floor_log2(std::uint64_t v) { return v ? 63 - std::countl_zero(v) : 0; }

// Largest dim V (linear) with V inside H, by include/exclude on the least
// element of H outside V. H stays a union of V-cosets throughout.
class SubspaceSearch {
 public:
  explicit SubspaceSearch(std::uint64_t budget) : budget_(budget) {}

  int run(const PointSet& h) {
    best_ = 0;
    aborted_ = false;
    nodes_ = 0;
    rec({0}, h, 0);
    return best_;
  }
  bool aborted() const { return aborted_; }

 private:
  void rec(const std::vector<std::uint64_t>& v, const PointSet& h, int dim) {
    if (aborted_) return;
    if (budget_ && ++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    best_ = std::max(best_, dim);
    if (floor_log2(count(h)) <= best_) return;
    PointSet rest = h;
    for (auto e : v) rest[e >> 6] &= ~(std::uint64_t{1} << (e & 63));
    std::uint64_t u = 0;
    bool found = false;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i]) {
        u = i * 64 + std::countr_zero(rest[i]);
        found = true;
        break;
      }
    }
    if (!found) return;

    std::vector<std::uint64_t> wider = v;
    for (auto e : v) wider.push_back(e ^ u);
    PointSet shifted = xor_shift(h, u);
    PointSet inner(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) inner[i] = h[i] & shifted[i];
    rec(wider, inner, dim + 1);

    PointSet without = h;
    for (auto e : v) {
      const auto p = e ^ u;
      without[p >> 6] &= ~(std::uint64_t{1} << (p & 63));
    }
    rec(v, without, dim);
  }

  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  int best_ = 0;
};

bool is_symmetric(const BooleanFunction& f) {
  for (Assignment x = 0; x < f.table_size(); ++x) {
    const Assignment rep = (Assignment{1} << std::popcount(x)) - 1;
    if (f.bit(x) != f.bit(rep)) return false;
  }
  return true;
}

}  // namespace

CertificateReport parity_certificate(const BooleanFunction& f, std::uint64_t node_budget) {
  const int n = f.num_vars();
  const std::uint64_t size = f.table_size();
  CertificateReport r;
  r.per_x_lower.assign(size, 0);
  r.per_x_upper.assign(size, 0);
  const bool symmetric = is_symmetric(f);
  std::vector<int> by_weight_lo(n + 1, -1), by_weight_hi(n + 1, -1);
  SubspaceSearch search(node_budget);
  for (Assignment x = 0; x < size; ++x) {
    const int w = std::popcount(x);
    if (symmetric && by_weight_lo[w] >= 0) {
      r.per_x_lower[x] = by_weight_lo[w];
      r.per_x_upper[x] = by_weight_hi[w];
      continue;
    }
    PointSet same((size + 63) / 64, 0);
    for (Assignment u = 0; u < size; ++u)
      if (f.bit(x ^ u) == f.bit(x)) same[u >> 6] |= std::uint64_t{1} << (u & 63);
    const int found = search.run(same);
    r.per_x_upper[x] = n - found;
    r.per_x_lower[x] = search.aborted() ? n - floor_log2(count(same)) : n - found;
    if (search.aborted()) r.exact = false;
    by_weight_lo[w] = r.per_x_lower[x];
    by_weight_hi[w] = r.per_x_upper[x];
  }
  for (Assignment x = 0; x < size; ++x) r.value = std::max(r.value, r.per_x_lower[x]);
  return r;
}

std::string solve_report_json(const SolveReport& r, int n, const std::string& function_id) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["function_id"] = function_id;
  if (r.exact) j["exact_depth"] = r.depth;
  else j["interval"] = {r.lower, r.upper};
  j["bounds"] = {{"spar", r.bounds.sparsity_bound},
                 {"deg2", r.bounds.deg2_bound},
                 {"gran", r.bounds.gran_bound},
                 {"cert", r.bounds.cert_bound ? nlohmann::ordered_json(*r.bounds.cert_bound) : nlohmann::ordered_json()}};
  j["nodes_expanded"] = r.nodes_expanded;
  j["memo_hits"] = r.memo_hits;
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

}  // namespace pdtlab
