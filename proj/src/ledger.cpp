#include "pdtlab/ledger.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

namespace pdtlab {

std::string resolve_ledger_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PDTLAB_LEDGER")) return env;
  return {};
}

Json measures_record(const BooleanFunction& f, const std::string& function_id, bool with_certificate) {
  const BoundProfile b = bound_profile(f, with_certificate);
  Json j;
  j["function_id"] = function_id;
  j["n"] = f.num_vars();
  j["spar"] = b.spar;
  j["gran"] = b.gran;
  j["deg2"] = b.deg2;
  if (b.cert_bound) j["cert"] = *b.cert_bound;
  j["bounds"] = {{"spar", b.sparsity_bound}, {"deg2", b.deg2_bound}, {"gran", b.gran_bound}, {"best_lower", b.best_lower}};
  return j;
}

void add_solve_fields(Json& entry, const SolveReport& r) {
  if (r.exact) entry["exact_depth"] = r.depth;
  else entry["interval"] = {r.lower, r.upper};
  entry["nodes_expanded"] = r.nodes_expanded;
  entry["memo_hits"] = r.memo_hits;
  entry["wall_ms"] = r.wall_ms;
}

void append_ledger(const std::string& path, const std::string& kind, Json entry) {
  entry["kind"] = kind;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  entry["timestamp"] = stamp;
  entry["tool_version"] = kToolVersion;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open ledger " + path);
  out << entry.dump() << '\n';
  if (!out) throw Error("cannot write ledger " + path);
}

bool valid_ledger_entry(const Json& e, std::string* why) {
  auto fail = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!e.is_object()) return fail("not an object");
  for (const char* key : {"function_id", "kind", "timestamp", "tool_version"})
    if (!e.contains(key) || !e[key].is_string()) return fail(std::string("missing string field ") + key);
  if (!e.contains("n") || !e["n"].is_number_integer()) return fail("missing integer field n");
  for (const char* key : {"spar", "gran", "deg2", "cert", "exact_depth"})
    if (e.contains(key) && !e[key].is_number_integer()) return fail(std::string(key) + " must be an integer");
  if (e.contains("bounds") && !e["bounds"].is_object()) return fail("bounds must be an object");
  if (e.contains("interval")) {
    const auto& iv = e["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() || !iv[1].is_number_integer() || iv[0] > iv[1])
      return fail("interval must be [lower, upper]");
  }
  if (e.contains("exact_depth") && e.contains("interval")) return fail("both exact_depth and interval present");
  return true;
}

}  // namespace pdtlab
