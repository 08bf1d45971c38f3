#include "pdtlab/circuits.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace pdtlab {

int XorAndCircuit::and_count() const {
  int c = 0;
  for (const auto& g : gates) c += g.kind == GateKind::And;
  return c;
}

int XorAndCircuit::eval_bit(Assignment x) const {
  std::vector<int> v(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    switch (g.kind) {
      case GateKind::Input: v[i] = static_cast<int>((x >> (g.input - 1)) & 1U); break;
      case GateKind::Not: v[i] = v[g.a] ^ 1; break;
      case GateKind::Xor: v[i] = v[g.a] ^ v[g.b]; break;
      case GateKind::And: v[i] = v[g.a] & v[g.b]; break;
    }
  }
  return v[output];
}

BooleanFunction XorAndCircuit::truth_table() const {
  return BooleanFunction::from_predicate(n, [this](Assignment x) { return eval_bit(x) == 1; });
}

int and_count(const XorAndCircuit& c) { return c.and_count(); }
int eval_circuit(const XorAndCircuit& c, Assignment x) { return c.eval(x); }

namespace {

struct RawGate {
  GateKind kind;
  long long a = 0;
  long long b = 0;
  int line = 0;
};

long long parse_id(std::string_view tok, int line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("netlist line " + std::to_string(line) + ": bad identifier '" + std::string(tok) + "'");
  return v;
}

}  // namespace

XorAndCircuit parse_circuit(std::string_view text) {
  std::map<long long, RawGate> defs;
  std::vector<long long> inputs;
  std::optional<long long> out_id;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [lineno](const std::string& what) -> ParseError {
      return ParseError("netlist line " + std::to_string(lineno) + ": " + what);
    };
    if (tok[0] == "INPUT") {
      if (tok.size() != 2) throw fail("INPUT takes one id");
      const auto id = parse_id(tok[1], lineno);
      if (defs.count(id)) throw fail("duplicate id " + tok[1]);
      defs[id] = RawGate{GateKind::Input, 0, 0, lineno};
      inputs.push_back(id);
    } else if (tok[0] == "OUTPUT") {
      if (tok.size() != 2) throw fail("OUTPUT takes one id");
      if (out_id) throw fail("more than one OUTPUT");
      out_id = parse_id(tok[1], lineno);
    } else {
      if (tok.size() < 4 || tok[1] != "=") throw fail("expected '<id> = OP ...'");
      const auto id = parse_id(tok[0], lineno);
      if (defs.count(id)) throw fail("duplicate id " + tok[0]);
      RawGate g{GateKind::Not, 0, 0, lineno};
      if (tok[2] == "NOT" && tok.size() == 4) {
        g.kind = GateKind::Not;
        g.a = parse_id(tok[3], lineno);
      } else if ((tok[2] == "XOR" || tok[2] == "AND") && tok.size() == 5) {
        g.kind = tok[2] == "XOR" ? GateKind::Xor : GateKind::And;
        g.a = parse_id(tok[3], lineno);
        g.b = parse_id(tok[4], lineno);
      } else {
        throw fail("unknown gate '" + tok[2] + "' or wrong operand count");
      }
      defs[id] = g;
    }
  }
  if (!out_id) throw ParseError("netlist has no OUTPUT");
  const int n = static_cast<int>(inputs.size());
  if (n > kMaxMaskVars) throw ParseError("netlist has too many inputs");
  for (auto id : inputs)
    if (id < 1 || id > n) throw ParseError("inputs must be numbered 1.." + std::to_string(n));

  XorAndCircuit c;
  c.n = n;
  std::map<long long, int> index;
  std::map<long long, int> state;  // 1 = on stack, 2 = placed
  std::function<int(long long)> place = [&](long long id) -> int {
    auto it = defs.find(id);
    if (it == defs.end()) throw ParseError("reference to undefined id " + std::to_string(id));
    if (state[id] == 2) return index[id];
    if (state[id] == 1) throw ParseError("netlist has a cycle through id " + std::to_string(id));
    state[id] = 1;
    const RawGate& r = it->second;
    Gate g;
    g.kind = r.kind;
    if (r.kind == GateKind::Input) g.input = static_cast<int>(id);
    if (r.kind == GateKind::Not || r.kind == GateKind::Xor || r.kind == GateKind::And) g.a = place(r.a);
    if (r.kind == GateKind::Xor || r.kind == GateKind::And) g.b = place(r.b);
    c.gates.push_back(g);
    state[id] = 2;
    return index[id] = static_cast<int>(c.gates.size() - 1);
  };
  // Inputs first so gate indices 0..n-1 are x_1..x_n, then declaration order.
  for (long long i = 1; i <= n; ++i) place(i);
  std::vector<std::pair<int, long long>> by_line;
  for (const auto& [id, g] : defs) by_line.emplace_back(g.line, id);
  std::sort(by_line.begin(), by_line.end());
  for (const auto& [line_no, id] : by_line) place(id);
  c.output = place(*out_id);
  return c;
}

XorAndCircuit load_circuit(const std::string& path) { return parse_circuit(read_file(path)); }

std::string write_circuit(const XorAndCircuit& c) {
  std::string out;
  auto id = [&c](int g) { return c.gates[g].kind == GateKind::Input ? c.gates[g].input : c.n + g + 1; };
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    const auto self = std::to_string(id(static_cast<int>(i)));
    switch (g.kind) {
      case GateKind::Input: out += "INPUT " + self + "\n"; break;
      case GateKind::Not: out += self + " = NOT " + std::to_string(id(g.a)) + "\n"; break;
      case GateKind::Xor: out += self + " = XOR " + std::to_string(id(g.a)) + " " + std::to_string(id(g.b)) + "\n"; break;
      case GateKind::And: out += self + " = AND " + std::to_string(id(g.a)) + " " + std::to_string(id(g.b)) + "\n"; break;
    }
  }
  out += "OUTPUT " + std::to_string(id(c.output)) + "\n";
  return out;
}

namespace {

struct CircuitPlan {
  XorAndCircuit circuit;
  AndInputChoice choice;
  std::vector<bool> live;  // gates in the cone of the output
};

class CircuitSession final : public StrategySession {
 public:
  explicit CircuitSession(std::shared_ptr<const CircuitPlan> plan)
      : plan_(std::move(plan)), and_value_(plan_->circuit.gates.size()), asked_(plan_->circuit.n) {
    settle();
  }

  Action next() const override {
    if (output_) return Output{*output_ ? -1 : 1};
    return Query{pending_.mask};
  }

  void answer(int bit) override {
    asked_ = asked_.with(pending_.mask, bit);
    settle();
  }

  std::unique_ptr<StrategySession> clone() const override { return std::make_unique<CircuitSession>(*this); }

 private:
  // Forms for every gate, given the AND gates resolved so far.
  std::vector<std::optional<AffineForm>> forms() const {
    const auto& gates = plan_->circuit.gates;
    std::vector<std::optional<AffineForm>> f(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const auto& g = gates[i];
      switch (g.kind) {
        case GateKind::Input: f[i] = AffineForm{ParityMask::variable(g.input), 0}; break;
        case GateKind::Not:
          if (f[g.a]) f[i] = AffineForm{f[g.a]->mask, f[g.a]->constant ^ 1};
          break;
        case GateKind::Xor:
          if (f[g.a] && f[g.b]) f[i] = *f[g.a] ^ *f[g.b];
          break;
        case GateKind::And: f[i] = and_value_[i]; break;
      }
    }
    return f;
  }

  // Value of a form if the answers so far determine it.
  std::optional<int> known(const AffineForm& form) const {
    if (form.is_constant()) return form.constant;
    const int forced = asked_.forced_value(form.mask);
    if (forced < 0) return std::nullopt;
    return forced ^ form.constant;
  }

  // Resolves everything that needs no query; leaves either an output or
  // a pending query.
  void settle() {
    const auto& gates = plan_->circuit.gates;
    for (;;) {
      const auto f = forms();
      const auto& out = f[plan_->circuit.output];
      if (out) {
        if (auto v = known(*out)) {
          output_ = *v;
          return;
        }
        pending_ = *out;
        return;
      }
      std::size_t g = 0;
      while (g < gates.size() && !(plan_->live[g] && gates[g].kind == GateKind::And && !and_value_[g] && f[gates[g].a] &&
                                   f[gates[g].b]))
        ++g;
      if (g == gates.size()) throw Error("circuit has an AND gate that never becomes affine");
      const AffineForm& left = *f[gates[g].a];
      const AffineForm& right = *f[gates[g].b];
      const auto lv = known(left);
      const auto rv = known(right);
      if (lv || rv) {
        // A known input of value 0 zeroes the gate; value 1 passes the other input.
        const int v = lv ? *lv : *rv;
        and_value_[g] = v == 0 ? AffineForm{} : (lv ? right : left);
        continue;
      }
      const bool ask_left = plan_->choice == AndInputChoice::Left ||
                            (plan_->choice == AndInputChoice::SmallerMask && left.mask.bits <= right.mask.bits);
      pending_ = ask_left ? left : right;
      return;
    }
  }

  std::shared_ptr<const CircuitPlan> plan_;
  std::vector<std::optional<AffineForm>> and_value_;
  Coset asked_;
  AffineForm pending_;
  std::optional<int> output_;
};

class CircuitStrategy final : public Strategy {
 public:
  explicit CircuitStrategy(std::shared_ptr<const CircuitPlan> plan) : plan_(std::move(plan)) {}
  int num_vars() const override { return plan_->circuit.n; }
  int budget() const override { return plan_->circuit.and_count() + 1; }
  std::string name() const override { return "circuit"; }
  std::unique_ptr<StrategySession> start() const override { return std::make_unique<CircuitSession>(plan_); }

 private:
  std::shared_ptr<const CircuitPlan> plan_;
};

}  // namespace

std::unique_ptr<Strategy> circuit_to_strategy(const XorAndCircuit& c, AndInputChoice choice) {
  if (c.output < 0 || c.output >= static_cast<int>(c.gates.size())) throw Error("circuit has no valid output gate");
  std::vector<bool> live(c.gates.size(), false);
  live[c.output] = true;
  for (int i = c.output; i >= 0; --i) {
    if (!live[i]) continue;
    if (c.gates[i].a >= 0) live[c.gates[i].a] = true;
    if (c.gates[i].b >= 0) live[c.gates[i].b] = true;
  }
  return std::make_unique<CircuitStrategy>(std::make_shared<const CircuitPlan>(CircuitPlan{c, choice, std::move(live)}));
}

}  // namespace pdtlab
