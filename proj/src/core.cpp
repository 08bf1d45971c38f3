#include "pdtlab/core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace pdtlab {

Valuation nu2(std::int64_t value) {
  if (value == 0) return Valuation::infinity();
  return {std::countr_zero(static_cast<std::uint64_t>(value)), false};
}

int ones_in_binary(std::uint64_t m) { return std::popcount(m); }

namespace {

std::size_t word_count(int n) { return n >= 6 ? std::size_t{1} << (n - 6) : 1; }

std::uint64_t last_word_mask(int n) {
  return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
}

void check_vars(int n) {
  if (n < 0 || n > kMaxVars)
    throw Error("variable count " + std::to_string(n) + " outside [0, " + std::to_string(kMaxVars) + "]");
}

}  // namespace

BooleanFunction::BooleanFunction(int n) : n_(n) {
  check_vars(n);
  words_.assign(word_count(n), 0);
}

BooleanFunction::BooleanFunction(int n, std::vector<std::uint64_t> words) : n_(n), words_(std::move(words)) {
  check_vars(n);
  if (words_.size() != word_count(n)) throw Error("truth table has wrong length for n=" + std::to_string(n));
  words_.back() &= last_word_mask(n);
}

BooleanFunction BooleanFunction::from_predicate(int n, const std::function<bool(Assignment)>& is_true) {
  check_vars(n);
  std::vector<std::uint64_t> words(word_count(n), 0);
  const std::uint64_t size = std::uint64_t{1} << n;
  for (Assignment x = 0; x < size; ++x)
    if (is_true(x)) words[x >> 6] |= std::uint64_t{1} << (x & 63);
  return {n, std::move(words)};
}

BooleanFunction BooleanFunction::constant(int n, int value) {
  check_vars(n);
  std::vector<std::uint64_t> words(word_count(n), value == -1 ? ~std::uint64_t{0} : 0);
  return {n, std::move(words)};
}

std::uint64_t BooleanFunction::count_true() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

bool BooleanFunction::is_constant() const {
  const std::uint64_t c = count_true();
  return c == 0 || c == table_size();
}

int eval(const BooleanFunction& f, Assignment x) { return f(x); }

BooleanFunction majority(int n) {
  return BooleanFunction::from_predicate(n, [n](Assignment x) { return 2 * std::popcount(x) >= n; });
}

BooleanFunction threshold(int n, int k) {
  return BooleanFunction::from_predicate(n, [k](Assignment x) { return std::popcount(x) >= k; });
}

int recursive_majority_value(int depth, Assignment x) {
  // Level l holds its results at bit positions that are multiples of 3^l.
  std::uint64_t m = x;
  std::uint64_t stride = 1;
  std::uint64_t width = 1;
  for (int i = 0; i < depth; ++i) width *= 3;
  for (int level = 0; level < depth; ++level) {
    std::uint64_t sel = 0;
    for (std::uint64_t pos = 0; pos < width; pos += 3 * stride) sel |= std::uint64_t{1} << pos;
    const std::uint64_t a = m & sel;
    const std::uint64_t b = (m >> stride) & sel;
    const std::uint64_t c = (m >> (2 * stride)) & sel;
    m = (a & b) | (a & c) | (b & c);
    stride *= 3;
  }
  return (m & 1U) ? -1 : 1;
}

BooleanFunction recursive_majority(int depth) {
  if (depth < 0) throw Error("rmaj depth must be nonnegative");
  int n = 1;
  for (int i = 0; i < depth; ++i) {
    n *= 3;
    if (n > kMaxVars) throw Error("rmaj:" + std::to_string(depth) + " needs more than " + std::to_string(kMaxVars) + " variables");
  }
  return BooleanFunction::from_predicate(n, [depth](Assignment x) { return recursive_majority_value(depth, x) == -1; });
}

BooleanFunction inner_product(int n) {
  if (n % 2 != 0) throw Error("inner product needs an even number of variables");
  const int m = n / 2;
  const std::uint64_t lo = (std::uint64_t{1} << m) - 1;
  return BooleanFunction::from_predicate(n, [m, lo](Assignment x) { return std::popcount(x & (x >> m) & lo) & 1; });
}

BooleanFunction random_function(int n, std::uint64_t seed) {
  check_vars(n);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words(word_count(n));
  for (auto& w : words) w = rng();
  return {n, std::move(words)};
}

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
  std::size_t arity;
};

constexpr FamilyName kFamilies[] = {
    {Family::Maj, "maj", 1},      {Family::Thr, "thr", 2},          {Family::RMaj, "rmaj", 1},
    {Family::And, "and", 1},      {Family::Or, "or", 1},            {Family::Parity, "parity", 1},
    {Family::InnerProduct, "ip", 1}, {Family::Constant, "const", 2}, {Family::Random, "random", 2},
};

const FamilyName& family_info(Family f) {
  for (const auto& e : kFamilies)
    if (e.family == f) return e;
  throw Error("unknown family");
}

}  // namespace

std::string NamedFunction::id() const {
  std::string out(family_info(family).name);
  out += ':';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(params[i]);
  }
  return out;
}

int NamedFunction::num_vars() const {
  if (family == Family::RMaj) {
    std::int64_t n = 1;
    for (std::int64_t i = 0; i < params.at(0); ++i) n *= 3;
    return static_cast<int>(n);
  }
  return static_cast<int>(params.at(0));
}

NamedFunction parse_named(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("function spec '" + std::string(spec) + "' lacks ':'");
  const auto name = spec.substr(0, colon);
  const FamilyName* info = nullptr;
  for (const auto& e : kFamilies)
    if (e.name == name) info = &e;
  if (!info) throw ParseError("unknown function family '" + std::string(name) + "'");

  NamedFunction fn{info->family, {}};
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto tok = rest.substr(0, comma);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ParseError("bad integer '" + std::string(tok) + "' in function spec");
    fn.params.push_back(v);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (fn.params.size() != info->arity)
    throw ParseError("family '" + std::string(name) + "' takes " + std::to_string(info->arity) + " parameter(s)");
  const auto p0 = fn.params[0];
  if (p0 < 1)
    throw ParseError("family '" + std::string(name) + "' needs a positive first parameter");
  if (fn.family == Family::InnerProduct && p0 % 2 != 0) throw ParseError("ip needs an even variable count");
  return fn;
}

BooleanFunction build_named(Family family, std::span<const std::int64_t> params) {
  const auto& info = family_info(family);
  if (params.size() != info.arity) throw Error("family '" + std::string(info.name) + "' has wrong parameter count");
  const auto p0 = params[0];
  if (family != Family::RMaj && (p0 < 1 || p0 > kMaxVars))
    throw Error("variable count " + std::to_string(p0) + " outside [1, " + std::to_string(kMaxVars) + "]");
  const int n = static_cast<int>(p0);
  switch (family) {
    case Family::Maj: return majority(n);
    case Family::Thr: {
      // k <= 0 is constant true, k > n constant false; both fall out of the predicate.
      const auto k = std::clamp<std::int64_t>(params[1], -1, n + 1);
      return threshold(n, static_cast<int>(k));
    }
    case Family::RMaj: return recursive_majority(static_cast<int>(p0));
    case Family::And: return BooleanFunction::from_predicate(n, [n](Assignment x) { return std::popcount(x) == n; });
    case Family::Or: return BooleanFunction::from_predicate(n, [](Assignment x) { return x != 0; });
    case Family::Parity: return BooleanFunction::from_predicate(n, [](Assignment x) { return std::popcount(x) & 1; });
    case Family::InnerProduct: return inner_product(n);
    case Family::Constant:
      if (params[1] != 1 && params[1] != -1) throw Error("constant value must be 1 or -1");
      return BooleanFunction::constant(n, static_cast<int>(params[1]));
    case Family::Random: return random_function(n, static_cast<std::uint64_t>(params[1]));
  }
  throw Error("unknown family");
}

BooleanFunction build_named(const NamedFunction& fn) { return build_named(fn.family, fn.params); }

std::string write_pdttt(const BooleanFunction& f) {
  static constexpr char kHex[] = "0123456789abcdef";
  const std::uint64_t size = f.table_size();
  const std::uint64_t chars = (size + 3) / 4;
  std::string out = "PDTTT 1\nn=" + std::to_string(f.num_vars()) + "\n";
  out.reserve(out.size() + chars + 1);
  for (std::uint64_t j = 0; j < chars; ++j) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b)
      if (4 * j + b < size && f.bit(4 * j + b)) nibble |= 1U << b;
    out += kHex[nibble];
  }
  out += '\n';
  return out;
}

BooleanFunction read_pdttt(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic, nline, hex;
  if (!std::getline(in, magic)) throw ParseError("empty truth-table file");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != "PDTTT 1") throw ParseError("missing 'PDTTT 1' header");
  if (!std::getline(in, nline) || nline.rfind("n=", 0) != 0) throw ParseError("missing 'n=<int>' line");
  if (nline.back() == '\r') nline.pop_back();
  int n = 0;
  auto [ptr, ec] = std::from_chars(nline.data() + 2, nline.data() + nline.size(), n);
  if (ec != std::errc{} || ptr != nline.data() + nline.size()) throw ParseError("bad n line '" + nline + "'");
  if (n < 0 || n > kMaxVars) throw ParseError("n=" + std::to_string(n) + " exceeds the supported maximum");
  std::getline(in, hex);
  if (!hex.empty() && hex.back() == '\r') hex.pop_back();
  const std::uint64_t size = std::uint64_t{1} << n;
  if (hex.size() != (size + 3) / 4)
    throw ParseError("hex table has " + std::to_string(hex.size()) + " characters, expected " + std::to_string((size + 3) / 4));
  std::vector<std::uint64_t> words(word_count(n), 0);
  for (std::uint64_t j = 0; j < hex.size(); ++j) {
    const char c = hex[j];
    unsigned v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError(std::string("bad hex character '") + c + "'");
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t idx = 4 * j + b;
      if (!((v >> b) & 1U)) continue;
      if (idx >= size) throw ParseError("bits set beyond the table length");
      words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    }
  }
  std::string trailing;
  while (std::getline(in, trailing))
    if (trailing.find_first_not_of(" \t\r") != std::string::npos) throw ParseError("unexpected trailing content");
  return {n, std::move(words)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BooleanFunction load_pdttt(const std::string& path) { return read_pdttt(read_file(path)); }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace pdtlab
