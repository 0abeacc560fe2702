#pragma once

// Brute-force reference implementations for tests. Nothing here calls into
// the library's counting kernels: every oracle loops over the raw elements
// with exact rational arithmetic and std::map.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "sumprod/rational.hpp"
#include "sumprod/rset.hpp"

namespace oracle {

using sumprod::Rational;
using sumprod::RSet;

enum class Kind { sum, difference, product, ratio };

inline std::map<Rational, std::uint64_t> realisations(const RSet& a, const RSet& b, Kind k) {
  std::map<Rational, std::uint64_t> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Rational v;
      switch (k) {
        case Kind::sum: v = x + y; break;
        case Kind::difference: v = x - y; break;
        case Kind::product: v = x * y; break;
        case Kind::ratio: v = x / y; break;
      }
      ++out[v];
    }
  return out;
}

inline std::vector<Rational> keys(const std::map<Rational, std::uint64_t>& m) {
  std::vector<Rational> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

inline std::uint64_t quadruples(const RSet& a) {
  std::uint64_t n = 0;
  for (const auto& p : a)
    for (const auto& q : a)
      for (const auto& r : a)
        for (const auto& s : a)
          if (p * s == q * r) ++n;
  return n;
}

/// Random set of `n` distinct rationals with numerators in [-range, range]
/// (or [1, range] when positive) and denominators in [1, max_den].
inline RSet random_set(std::mt19937_64& rng, std::size_t n, std::int64_t range, std::int64_t max_den, bool positive) {
  std::uniform_int_distribution<std::int64_t> num(positive ? 1 : -range, range);
  std::uniform_int_distribution<std::int64_t> den(1, max_den);
  std::set<Rational> s;
  while (s.size() < n) s.insert(Rational(num(rng), den(rng)));
  return RSet::make(std::vector<Rational>(s.begin(), s.end()));
}

inline RSet ints(std::initializer_list<std::int64_t> v) {
  std::vector<Rational> out;
  for (auto x : v) out.emplace_back(x);
  return RSet::make(out);
}

inline RSet interval(std::int64_t n) {
  std::vector<Rational> out;
  for (std::int64_t i = 1; i <= n; ++i) out.emplace_back(i);
  return RSet::make(out);
}

}  // namespace oracle
