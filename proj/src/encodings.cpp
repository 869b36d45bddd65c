#include "graylap/encodings.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace graylap {

std::string_view to_string(EncodingKind k) {
  switch (k) {
    case EncodingKind::binary: return "binary";
    case EncodingKind::brgc: return "brgc";
    case EncodingKind::sequency: return "sequency";
    case EncodingKind::h2gc: return "h2gc";
  }
  return "?";
}

EncodingKind parse_encoding_kind(std::string_view s) {
  if (s == "binary") return EncodingKind::binary;
  if (s == "brgc" || s == "gray") return EncodingKind::brgc;
  if (s == "sequency") return EncodingKind::sequency;
  if (s == "h2gc") return EncodingKind::h2gc;
  throw ConfigError("unknown encoding '" + std::string(s) +
                    "' (expected binary, brgc, sequency or h2gc)");
}

std::string_view to_string(DontCareFill f) {
  return f == DontCareFill::zero ? "zero" : "nearest_valid";
}

DontCareFill parse_dont_care_fill(std::string_view s) {
  if (s == "zero") return DontCareFill::zero;
  if (s == "nearest_valid" || s == "nearest") return DontCareFill::nearest_valid;
  throw ConfigError("unknown don't-care fill '" + std::string(s) + "'");
}

int hamming(Code a, Code b) { return popcount(a ^ b); }

Code bit_reverse(Code c, int width) {
  Code r = 0;
  for (int i = 0; i < width; ++i) r |= ((c >> i) & 1) << (width - 1 - i);
  return r;
}

Code brgc_encode(std::uint64_t n, int width) {
  if (width < 1 || width > kMaxWidth || n > width_mask(width))
    throw ContractError("brgc_encode: " + std::to_string(n) +
                        " out of range for width " + std::to_string(width));
  return n ^ (n >> 1);
}

Code brgc_encode(std::uint64_t n) { return n ^ (n >> 1); }

std::uint64_t brgc_decode(Code code) {
  std::uint64_t n = code;
  for (int s = 1; s < 64; s <<= 1) n ^= n >> s;
  return n;
}

std::vector<Code> brgc_recursive(int width) {
  std::vector<Code> g{0, 1};
  for (int a = 2; a <= width; ++a) {
    const std::size_t half = g.size();
    for (std::size_t i = 0; i < half; ++i)
      g.push_back(g[half - 1 - i] | (Code{1} << (a - 1)));
  }
  return g;
}

// ---------------------------------------------------------------- tables

EncodingTable::EncodingTable(EncodingKind kind, int width,
                             std::vector<Code> path)
    : kind_(kind), width_(width), path_(std::move(path)) {
  if (width < 1 || width > kMaxStateWidth)
    throw ContractError("encoding width " + std::to_string(width) +
                        " unsupported");
  inverse_.assign(code_space(), -1);
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (path_[i] >= code_space())
      throw ContractError("code beyond width in encoding table");
    if (inverse_[path_[i]] >= 0)
      throw ContractError("encoding table repeats a code");
    inverse_[path_[i]] = static_cast<std::int64_t>(i);
  }
  for (Code c = 0; c < code_space(); ++c)
    if (inverse_[c] < 0) prohibited_.push_back(c);
  closed_ = path_.size() >= 2 && hamming(path_.front(), path_.back()) == 1;
}

std::optional<std::size_t> EncodingTable::position_of(Code c) const {
  if (c >= code_space() || inverse_[c] < 0) return std::nullopt;
  return static_cast<std::size_t>(inverse_[c]);
}

EncodingTable EncodingTable::binary(int width) {
  std::vector<Code> p(std::size_t{1} << width);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = n;
  return EncodingTable(EncodingKind::binary, width, std::move(p));
}

EncodingTable EncodingTable::brgc(int width) {
  std::vector<Code> p(std::size_t{1} << width);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = brgc_encode(n, width);
  return EncodingTable(EncodingKind::brgc, width, std::move(p));
}

EncodingTable EncodingTable::sequency(int width) {
  std::vector<Code> p(std::size_t{1} << width);
  for (std::size_t n = 0; n < p.size(); ++n)
    p[n] = bit_reverse(brgc_encode(n, width), width);
  return EncodingTable(EncodingKind::sequency, width, std::move(p));
}

EncodingTable EncodingTable::from_path(EncodingKind kind, int width,
                                       std::vector<Code> path) {
  EncodingTable t(kind, width, std::move(path));
  const auto& p = t.path_;
  if (kind == EncodingKind::brgc || kind == EncodingKind::h2gc) {
    for (std::size_t i = 1; i < p.size(); ++i)
      if (hamming(p[i - 1], p[i]) != 1)
        throw ContractError("consecutive codes differ in more than one bit");
  }
  if (kind == EncodingKind::h2gc) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        const bool wrap = t.closed_ && i == 0 && j == n - 1;
        if (!wrap && hamming(p[i], p[j]) < 2)
          throw ContractError("non-adjacent H2GC codes at distance 1");
      }
  } else if (!t.prohibited_.empty()) {
    throw ContractError(std::string(to_string(kind)) +
                        " table must cover every code");
  }
  return t;
}

EncodingTable sequency_table(int width) { return EncodingTable::sequency(width); }

EncodingTable make_table(EncodingKind kind, int width) {
  switch (kind) {
    case EncodingKind::binary: return EncodingTable::binary(width);
    case EncodingKind::brgc: return EncodingTable::brgc(width);
    case EncodingKind::sequency: return EncodingTable::sequency(width);
    case EncodingKind::h2gc: return EncodingTable::h2gc(width);
  }
  throw ContractError("unknown encoding kind");
}

// ---------------------------------------------------------------- h2gc

std::string serialize_h2gc(const EncodingTable& t) {
  auto bits = [&](Code c) {
    std::string s(t.width(), '0');
    for (int i = 0; i < t.width(); ++i)
      if ((c >> i) & 1) s[t.width() - 1 - i] = '1';
    return s;
  };
  std::string out;
  for (Code c : t.codes()) out += bits(c) + "\n";
  out += "#prohibited\n";
  for (Code c : t.prohibited()) out += bits(c) + "\n";
  return out;
}

EncodingTable parse_h2gc(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Code> path, prohibited;
  bool in_prohibited = false;
  int width = -1;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    if (line == "#prohibited") {
      in_prohibited = true;
      continue;
    }
    if (line[0] == '#') continue;
    if (width < 0) width = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != width ||
        line.find_first_not_of("01") != std::string::npos)
      throw ContractError("malformed H2GC line '" + line + "'");
    (in_prohibited ? prohibited : path).push_back(std::stoull(line, nullptr, 2));
  }
  if (width < 0) throw ContractError("empty H2GC table");
  auto t = EncodingTable::from_path(EncodingKind::h2gc, width, std::move(path));
  std::sort(prohibited.begin(), prohibited.end());
  if (prohibited != t.prohibited())
    throw ContractError("H2GC prohibited list disagrees with the path");
  return t;
}

std::filesystem::path bundled_h2gc_dir() {
  if (const char* env = std::getenv("GRAYLAP_DATA_DIR"))
    return std::filesystem::path(env) / "h2gc";
  return std::filesystem::path(GRAYLAP_DATA_DIR) / "h2gc";
}

std::optional<EncodingTable> load_bundled_h2gc(int width) {
  const auto p = bundled_h2gc_dir() / ("h2gc_A" + std::to_string(width) + ".txt");
  std::ifstream f(p);
  if (!f) return std::nullopt;
  std::stringstream ss;
  ss << f.rdbuf();
  auto t = parse_h2gc(ss.str());
  if (t.width() != width)
    throw ContractError("bundled H2GC file " + p.string() + " has wrong width");
  return t;
}

EncodingTable EncodingTable::h2gc(int width) {
  static std::mutex mu;
  static std::map<int, EncodingTable> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(width); it != cache.end()) return it->second;
  if (width < 2 || width > kH2gcMaxWidth)
    throw UnsupportedError("no H2GC table for width " + std::to_string(width) +
                           " (supported 2.." + std::to_string(kH2gcMaxWidth) +
                           ")");
  std::optional<EncodingTable> t;
  if (width <= kH2gcSearchLimit) {
    auto r = search_coil(width);
    if (r.path.empty()) {
      CoilSearchOptions open;
      open.require_closed = false;
      r = search_coil(width, open);
    }
    t = from_path(EncodingKind::h2gc, width, std::move(r.path));
  } else {
    t = load_bundled_h2gc(width);
    if (!t)
      throw UnsupportedError("H2GC width " + std::to_string(width) +
                             " needs the bundled table in " +
                             bundled_h2gc_dir().string());
  }
  cache.emplace(width, *t);
  return *t;
}

EncodingTable h2gc_table(int width) { return EncodingTable::h2gc(width); }

// ---------------------------------------------------------------- re-encode

std::vector<double> reencode_vector(std::span<const double> v,
                                    const EncodingTable& to,
                                    std::optional<DontCareFill> fill) {
  if (v.size() != to.positions())
    throw ContractError("reencode_vector: " + std::to_string(v.size()) +
                        " values for " + std::to_string(to.positions()) +
                        " positions");
  if (!to.prohibited().empty() && !fill)
    throw ContractError(
        "reencode_vector: table has prohibited codes; supply a don't-care fill");
  std::vector<double> out(to.code_space(), 0.0);
  for (std::size_t m = 0; m < v.size(); ++m) out[to.code(m)] = v[m];
  if (fill == DontCareFill::nearest_valid) {
    for (Code c : to.prohibited()) {
      int best = 1 << 30;
      std::size_t pos = 0;
      for (std::size_t m = 0; m < to.positions(); ++m) {
        const int d = hamming(c, to.code(m));
        if (d < best) best = d, pos = m;
      }
      out[c] = v[pos];
    }
  }
  return out;
}

}  // namespace graylap
