#pragma once

#include <string>

#include <json.hpp>

#include "pdtlab/core.hpp"
#include "pdtlab/solver.hpp"

namespace pdtlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Path from the flag, else $PDTLAB_LEDGER, else empty (no ledger).
std::string resolve_ledger_path(const std::string& flag);

/// Measure fields for one function: function_id, n, spar, gran, deg2,
/// optional cert, bounds.
Json measures_record(const BooleanFunction& f, const std::string& function_id, bool with_certificate = false);

/// Adds exact_depth or interval, and search statistics.
void add_solve_fields(Json& entry, const SolveReport& r);

/// Stamps kind, timestamp and tool_version and appends one line.
void append_ledger(const std::string& path, const std::string& kind, Json entry);

/// Structural check of a ledger line: required fields and their types.
bool valid_ledger_entry(const Json& entry, std::string* why = nullptr);

}  // namespace pdtlab
