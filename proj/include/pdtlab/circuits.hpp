#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdtlab/core.hpp"
#include "pdtlab/pdt.hpp"

namespace pdtlab {

/// <mask, x> + constant over GF(2).
struct AffineForm {
  ParityMask mask;
  int constant = 0;

  bool is_constant() const { return mask.empty(); }
  int apply(Assignment x) const { return mask.apply(x) ^ constant; }
  AffineForm operator^(const AffineForm& o) const { return {mask ^ o.mask, constant ^ o.constant}; }
  bool operator==(const AffineForm&) const = default;
};

enum class GateKind { Input, Not, Xor, And };

struct Gate {
  GateKind kind = GateKind::Input;
  int a = -1;  // operand gate indices (positions in XorAndCircuit::gates)
  int b = -1;
  int input = 0;  // variable index for Input gates
};

/// Fan-in two XOR/AND/NOT netlist, topologically ordered.
struct XorAndCircuit {
  int n = 0;
  std::vector<Gate> gates;
  int output = -1;

  int and_count() const;
  /// GF(2) value of the output gate.
  int eval_bit(Assignment x) const;
  /// Output in {-1, 1}; bit 1 is "true" (-1).
  int eval(Assignment x) const { return eval_bit(x) ? -1 : 1; }
  BooleanFunction truth_table() const;
};

/// Netlist text: `INPUT <i>`, `<id> = NOT <id>`, `<id> = XOR <id> <id>`,
/// `<id> = AND <id> <id>`, `OUTPUT <id>`. Inputs are ids 1..n; `#` starts
/// a comment. Lines may appear in any order as long as there is no cycle.
XorAndCircuit parse_circuit(std::string_view text);
XorAndCircuit load_circuit(const std::string& path);
std::string write_circuit(const XorAndCircuit& c);

int and_count(const XorAndCircuit& c);
int eval_circuit(const XorAndCircuit& c, Assignment x);

enum class AndInputChoice { SmallerMask, Left, Right };

/// Resolves AND gates one at a time (first in topological order whose
/// inputs are affine) with one query each, then reads the affine output.
/// Worst case and_count + 1 queries.
std::unique_ptr<Strategy> circuit_to_strategy(const XorAndCircuit& c, AndInputChoice choice = AndInputChoice::SmallerMask);

}  // namespace pdtlab
