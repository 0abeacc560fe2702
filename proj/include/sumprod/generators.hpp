#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <openssl/evp.h>

#include "sumprod/json_io.hpp"
#include "sumprod/numeric.hpp"
#include "sumprod/set_ops.hpp"

namespace sumprod {

/// Sebastiano Vigna's SplitMix64; the state is a plain counter.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

namespace gen {

namespace detail {
inline void require_n(std::int64_t n) {
  if (n < 1) fail(errc::bad_params, "n must be at least 1");
}
inline void require_positive(const Rational& x, const char* what) {
  if (x.sign() <= 0) fail(errc::bad_params, std::string(what) + " must be positive");
}
}  // namespace detail

inline RSet interval(std::int64_t n) {
  detail::require_n(n);
  std::vector<Rational> v;
  v.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) v.emplace_back(i);
  return RSet::from_sorted_unique(std::move(v));
}

inline RSet ap(const Rational& a, const Rational& d, std::int64_t n) {
  detail::require_n(n);
  detail::require_positive(a, "a");
  if (d.is_zero() && n > 1) fail(errc::duplicate_elements, "common difference 0 repeats elements");
  detail::require_positive(d, "d");
  std::vector<Rational> v;
  Rational x = a;
  for (std::int64_t i = 0; i < n; ++i, x = x + d) v.push_back(x);
  return RSet::from_sorted_unique(std::move(v));
}

inline RSet gp(const Rational& a, const Rational& r, std::int64_t n) {
  detail::require_n(n);
  detail::require_positive(a, "a");
  if (r == Rational(1) && n > 1) fail(errc::duplicate_elements, "ratio 1 repeats elements");
  if (!(r > Rational(1))) fail(errc::bad_params, "ratio must exceed 1");
  std::vector<Rational> v;
  Rational x = a;
  for (std::int64_t i = 0; i < n; ++i, x = x * r) v.push_back(x);
  return RSet::from_sorted_unique(std::move(v));
}

/// {1^e, 2^e, ..., n^e}
inline RSet convex_power(std::int64_t n, unsigned e) {
  detail::require_n(n);
  if (e < 2) fail(errc::bad_params, "exponent must be at least 2");
  std::vector<Rational> v;
  for (std::int64_t i = 1; i <= n; ++i) v.emplace_back(ipow(BigInt(static_cast<long>(i)), e), BigInt(1));
  return RSet::from_sorted_unique(std::move(v));
}

/// start, start + g₁, start + g₁ + g₂, ... for strictly increasing positive gaps.
inline RSet convex_from_gaps(const std::vector<Rational>& gaps, const Rational& start = Rational(1)) {
  if (gaps.empty()) fail(errc::bad_params, "need at least one gap");
  if (gaps.front().sign() <= 0) fail(errc::bad_params, "gaps must be positive");
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (!(gaps[i] > gaps[i - 1])) fail(errc::bad_params, "gaps must be strictly increasing");
  std::vector<Rational> v{start};
  for (const auto& g : gaps) v.push_back(v.back() + g);
  return RSet::from_sorted_unique(std::move(v));
}

/// n distinct integers from [1, range], drawn with SplitMix64 and rejected on repeats.
inline RSet random_subset(std::int64_t range, std::int64_t n, std::uint64_t seed) {
  detail::require_n(n);
  if (range < n) fail(errc::bad_params, "range smaller than n");
  SplitMix64 rng(seed);
  std::unordered_set<std::int64_t> seen;
  std::vector<Rational> v;
  while (static_cast<std::int64_t>(v.size()) < n) {
    auto x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(range))) + 1;
    if (seen.insert(x).second) v.emplace_back(x);
  }
  return RSet::from_unsorted(std::move(v));
}

}  // namespace gen

// ---------------------------------------------------------------------------
// Generator specs: {"generator": "gp", "params": {...}} or {"elements": [...]}

struct SetSpec {
  nlohmann::json descriptor;
  RSet set;
};

namespace detail {

inline std::int64_t json_int(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) fail(errc::parse_error, std::string("missing parameter '") + key + "'");
  const auto& v = p[key];
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    Rational q = Rational::parse(v.get<std::string>());
    if (q.is_integer() && q.is_small()) return q.small_num();
  }
  fail(errc::parse_error, std::string("parameter '") + key + "' must be an integer");
}

inline Rational json_rat(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) fail(errc::parse_error, std::string("missing parameter '") + key + "'");
  return rational_from_json(p[key]);
}

}  // namespace detail

inline RSet generate(const nlohmann::json& spec) {
  if (!spec.is_object()) fail(errc::parse_error, "set spec must be an object");
  if (spec.contains("elements")) {
    const auto& e = spec["elements"];
    auto s = rset_from_json(e);
    if (s.size() != e.size()) fail(errc::duplicate_elements, "repeated elements in explicit set");
    return s;
  }
  if (!spec.contains("generator") || !spec["generator"].is_string())
    fail(errc::parse_error, "set spec needs 'generator' or 'elements'");
  const std::string g = spec["generator"].get<std::string>();
  const nlohmann::json p = spec.value("params", nlohmann::json::object());
  using detail::json_int;
  using detail::json_rat;
  if (g == "interval") return gen::interval(json_int(p, "n"));
  if (g == "ap") return gen::ap(json_rat(p, "a"), json_rat(p, "d"), json_int(p, "n"));
  if (g == "gp") return gen::gp(json_rat(p, "a"), json_rat(p, "r"), json_int(p, "n"));
  if (g == "convex_power") {
    auto e = json_int(p, "e");
    if (e < 2 || e > 64) fail(errc::bad_params, "exponent must lie in [2, 64]");
    return gen::convex_power(json_int(p, "n"), static_cast<unsigned>(e));
  }
  if (g == "convex_from_gaps") {
    if (!p.contains("gaps") || !p["gaps"].is_array()) fail(errc::parse_error, "missing parameter 'gaps'");
    std::vector<Rational> gaps;
    for (const auto& x : p["gaps"]) gaps.push_back(rational_from_json(x));
    return p.contains("start") ? gen::convex_from_gaps(gaps, json_rat(p, "start")) : gen::convex_from_gaps(gaps);
  }
  if (g == "random_subset") {
    std::uint64_t seed = 0;
    if (p.contains("seed")) {
      if (!p["seed"].is_number_unsigned()) fail(errc::parse_error, "seed must be a non-negative integer");
      seed = p["seed"].get<std::uint64_t>();
    }
    return gen::random_subset(json_int(p, "range"), json_int(p, "n"), seed);
  }
  fail(errc::parse_error, "unknown generator '" + g + "'");
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
}

namespace gen {
/// A JSON set spec, or a bare JSON array of elements.
inline RSet from_file(const std::string& path) {
  auto j = read_json_file(path);
  if (j.is_array()) j = nlohmann::json{{"elements", j}};
  return generate(j);
}
}  // namespace gen

/// Lower-case hex SHA-256.
inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

inline std::string content_hash(const RSet& s) { return sha256_hex(s.canonical_text()); }

/// Descriptor: the generator description plus size and content hash.
inline SetSpec realise(const nlohmann::json& spec) {
  SetSpec out;
  out.set = generate(spec);
  out.descriptor = spec.contains("elements") ? nlohmann::json{{"generator", "explicit"}} : spec;
  out.descriptor["size"] = out.set.size();
  out.descriptor["content_hash"] = content_hash(out.set);
  return out;
}

}  // namespace sumprod
