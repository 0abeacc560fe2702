#pragma once

#include <json.hpp>

#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/rset.hpp"

namespace sumprod {

/// Accepts "p/q" strings and JSON integers.
inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  fail(errc::parse_error, "expected a rational as \"p/q\" or an integer, got " + j.dump());
}

inline nlohmann::json to_json(const Rational& q) { return q.str(); }

inline nlohmann::json to_json(const RSet& s) {
  auto out = nlohmann::json::array();
  for (const auto& q : s) out.push_back(q.str());
  return out;
}

inline RSet rset_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(errc::parse_error, "expected an array of elements");
  std::vector<Rational> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return RSet::make(std::move(v));
}

}  // namespace sumprod
