#pragma once

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"

namespace sumprod::exponents {

enum class Symbol { K, M, A, S_tau, tau, T, Pi1, Pi2, AApAA, AdivA };
constexpr std::size_t symbol_count = 10;
constexpr std::array<Symbol, symbol_count> all_symbols{Symbol::K,   Symbol::M,   Symbol::A,     Symbol::S_tau, Symbol::tau,
                                                       Symbol::T,   Symbol::Pi1, Symbol::Pi2,   Symbol::AApAA, Symbol::AdivA};

constexpr std::string_view to_string(Symbol s) {
  constexpr std::array<std::string_view, symbol_count> names{"K", "M", "A", "S_tau", "tau", "T", "Pi1", "Pi2", "AApAA", "AdivA"};
  return names[static_cast<std::size_t>(s)];
}

inline Symbol symbol_from_string(std::string_view s) {
  for (auto sym : all_symbols)
    if (to_string(sym) == s) return sym;
  fail(errc::parse_error, "unknown symbol '" + std::string(s) + "'");
}

/// Rational exponents over the fixed symbol basis plus a power of log|A|.
struct ExponentVector {
  std::array<Rational, symbol_count> c{};
  Rational log;

  Rational& operator[](Symbol s) { return c[static_cast<std::size_t>(s)]; }
  const Rational& operator[](Symbol s) const { return c[static_cast<std::size_t>(s)]; }

  ExponentVector operator+(const ExponentVector& o) const {
    ExponentVector r;
    for (std::size_t i = 0; i < symbol_count; ++i) r.c[i] = c[i] + o.c[i];
    r.log = log + o.log;
    return r;
  }
  ExponentVector operator*(const Rational& k) const {
    ExponentVector r;
    for (std::size_t i = 0; i < symbol_count; ++i) r.c[i] = c[i] * k;
    r.log = log * k;
    return r;
  }
  bool operator==(const ExponentVector&) const = default;

  std::string str() const {
    std::string out;
    for (auto s : all_symbols) {
      if ((*this)[s].is_zero()) continue;
      if (!out.empty()) out += " ";
      out += std::string(to_string(s)) + "^" + (*this)[s].str();
    }
    if (!log.is_zero()) out += (out.empty() ? "" : " ") + std::string("log^") + log.str();
    return out.empty() ? "1" : out;
  }
};

/// Π symbol^v · log^{v.log}|A| ≥ 1, up to constants (and o(1) when `asymptotic`).
struct Relation {
  std::string name;
  ExponentVector v;
  bool asymptotic = false;

  /// LHS ≥ RHS with both sides as exponent vectors.
  static Relation from_sides(std::string name, const ExponentVector& lhs, const ExponentVector& rhs, bool asym = false) {
    return {std::move(name), lhs + rhs * Rational(-1), asym};
  }

  /// Positive exponents on the left, negative ones moved to the right.
  std::string str() const {
    ExponentVector l, r;
    for (auto s : all_symbols) {
      if (v[s].sign() > 0) l[s] = v[s];
      if (v[s].sign() < 0) r[s] = -v[s];
    }
    if (v.log.sign() > 0) l.log = v.log;
    if (v.log.sign() < 0) r.log = -v.log;
    return l.str() + (asymptotic ? " >~ " : " >= ") + r.str();
  }
};

struct Step {
  std::string op, description;
  std::vector<std::string> inputs;
  std::vector<Rational> multipliers;
  Relation result;
  bool verified = false;
};

struct Derivation {
  std::vector<Step> steps;
  Relation result;
};

namespace detail {

inline BigInt lcm_of_denominators(const std::vector<const ExponentVector*>& vs, const std::vector<Rational>& ks) {
  BigInt l = 1;
  auto take = [&](const Rational& q) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.denominator().get_mpz_t()); };
  for (const auto* v : vs) {
    for (const auto& x : v->c) take(x);
    take(v->log);
  }
  for (const auto& k : ks) take(k);
  return l;
}

inline std::vector<BigInt> integer_image(const ExponentVector& v, const BigInt& scale) {
  std::vector<BigInt> out;
  for (const auto& x : v.c) out.push_back(x.numerator() * (scale / x.denominator()));
  out.push_back(v.log.numerator() * (scale / v.log.denominator()));
  return out;
}

/// Re-checks Σ k_i v_i = result after clearing all denominators.
inline bool verify_combination(const std::vector<const ExponentVector*>& vs, const std::vector<Rational>& ks,
                               const ExponentVector& result) {
  std::vector<const ExponentVector*> all = vs;
  all.push_back(&result);
  BigInt l = lcm_of_denominators(all, ks);
  BigInt l2 = l * l;
  std::vector<BigInt> sum(symbol_count + 1, BigInt(0));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    BigInt kk = ks[i].numerator() * (l / ks[i].denominator());
    auto img = integer_image(*vs[i], l);
    for (std::size_t j = 0; j < img.size(); ++j) sum[j] += kk * img[j];
  }
  auto img = integer_image(result, l2);
  return sum == img;
}

}  // namespace detail

/// Positive combination k₁R₁ + k₂R₂ with k₂ = 1 chosen so that `s` cancels.
inline Relation eliminate(const Relation& r1, const Relation& r2, Symbol s, Step* step = nullptr) {
  const Rational a = r1.v[s], b = r2.v[s];
  if (a.is_zero() || b.is_zero() || a.sign() == b.sign())
    fail(errc::invalid_elimination, "eliminating " + std::string(to_string(s)) + " from '" + r1.name + "' and '" +
                                        r2.name + "' needs a negative power");
  const Rational k1 = -b / a, k2(1);
  Relation out{r1.name + "+" + r2.name, r1.v * k1 + r2.v * k2, r1.asymptotic || r2.asymptotic};
  out.v[s] = Rational();
  if (step) {
    step->op = "eliminate";
    step->inputs = {r1.name, r2.name};
    step->multipliers = {k1, k2};
    step->description = "eliminate " + std::string(to_string(s)) + ": " + k1.str() + " * (" + r1.name + ") + (" + r2.name + ")";
    step->verified = detail::verify_combination({&r1.v, &r2.v}, {k1, k2}, out.v);
    step->result = out;
  }
  return out;
}

/// Raises both sides to a positive power.
inline Relation scale(const Relation& r, const Rational& k) {
  if (k.sign() <= 0) fail(errc::invalid_elimination, "scaling by a non-positive power " + k.str());
  return {r.name, r.v * k, r.asymptotic};
}

/// Smallest positive multiple with coprime integer symbol exponents.
inline Relation normalize(const Relation& r) {
  BigInt l = 1, g = 0;
  for (const auto& x : r.v.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.denominator().get_mpz_t());
  for (const auto& x : r.v.c) {
    BigInt n = x.numerator() * (l / x.denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return r;
  return scale(r, Rational(l, g));
}

/// Substitutes `from` := `to` (the two quantities are set equal).
inline Relation identify(const Relation& r, Symbol from, Symbol to) {
  Relation out = r;
  out.v[to] = out.v[to] + out.v[from];
  out.v[from] = Rational();
  return out;
}

/// For a relation X^a ≥ A^b (a > 0, no other symbols): the exponent b/a.
inline Rational solve(const Relation& r, Symbol x) {
  for (auto s : all_symbols)
    if (s != x && s != Symbol::A && !r.v[s].is_zero())
      fail(errc::invalid_elimination, "symbol " + std::string(to_string(s)) + " still present");
  if (r.v[x].sign() <= 0) fail(errc::invalid_elimination, "no lower bound on " + std::string(to_string(x)));
  return -r.v[Symbol::A] / r.v[x];
}

/// Sequential elimination: R₀ with R₁ on eliminations[0], the result with R₂ on
/// eliminations[1], and so on; the outcome is normalized.
inline Derivation combine(const std::vector<Relation>& rels, const std::vector<Symbol>& eliminations) {
  if (rels.empty() || rels.size() != eliminations.size() + 1)
    fail(errc::invalid_elimination, "need exactly one more relation than eliminations");
  Derivation d;
  Relation cur = rels.front();
  for (std::size_t i = 0; i < eliminations.size(); ++i) {
    Step st;
    cur = eliminate(cur, rels[i + 1], eliminations[i], &st);
    d.steps.push_back(st);
  }
  Step st;
  st.op = "normalize";
  st.inputs = {cur.name};
  Relation n = normalize(cur);
  st.multipliers = {Rational(1)};
  for (std::size_t i = 0; i < symbol_count; ++i)
    if (!cur.v.c[i].is_zero()) {
      st.multipliers = {n.v.c[i] / cur.v.c[i]};
      break;
    }
  st.verified = detail::verify_combination({&cur.v}, st.multipliers, n.v);
  st.description = "scale by " + st.multipliers.front().str();
  st.result = n;
  d.steps.push_back(st);
  d.result = n;
  return d;
}

/// Two lower bounds X^{a_i} ≥ Π s^{b_i} for the same X: new is stronger iff
/// the returned monomial exceeds 1.
inline ExponentVector comparison_threshold(const Relation& stronger, const Relation& weaker, Symbol x) {
  const Rational a1 = stronger.v[x], a2 = weaker.v[x];
  if (a1.sign() <= 0 || a2.sign() <= 0) fail(errc::invalid_elimination, "both relations must bound " + std::string(to_string(x)));
  // a₁a₂(bound₁ − bound₂) with bound_i = −(v_i without x)/a_i
  ExponentVector diff = weaker.v * a1 + stronger.v * (-a2);
  diff[x] = Rational();
  diff.log = Rational();
  return diff;
}

/// Exponent of |A| after substituting each symbol s by |A|^{powers[s]}.
inline Rational evaluate(const ExponentVector& v, const std::map<Symbol, Rational>& powers) {
  Rational e = v[Symbol::A];
  for (auto s : all_symbols) {
    if (s == Symbol::A || v[s].is_zero()) continue;
    auto it = powers.find(s);
    if (it == powers.end()) fail(errc::bad_params, "no substitution for " + std::string(to_string(s)));
    e = e + v[s] * it->second;
  }
  return e;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const ExponentVector& v) {
  nlohmann::json j = nlohmann::json::object();
  for (auto s : all_symbols)
    if (!v[s].is_zero()) j[std::string(to_string(s))] = v[s].str();
  if (!v.log.is_zero()) j["log"] = v.log.str();
  return j;
}

inline nlohmann::json to_json(const Relation& r) {
  return {{"name", r.name}, {"exponents", to_json(r.v)}, {"asymptotic", r.asymptotic}, {"text", r.str()}};
}

inline nlohmann::json to_json(const Derivation& d) {
  auto steps = nlohmann::json::array();
  for (const auto& s : d.steps) {
    auto ks = nlohmann::json::array();
    for (const auto& k : s.multipliers) ks.push_back(k.str());
    steps.push_back({{"op", s.op},
                     {"description", s.description},
                     {"inputs", s.inputs},
                     {"multipliers", ks},
                     {"result", to_json(s.result)},
                     {"verified", s.verified}});
  }
  return {{"steps", steps}, {"result", to_json(d.result)}};
}

namespace detail {

inline Rational json_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  fail(errc::parse_error, "exponent must be an integer or a \"p/q\" string");
}

inline ExponentVector json_side(const nlohmann::json& j) {
  ExponentVector v;
  if (j.is_null()) return v;
  if (!j.is_object()) fail(errc::parse_error, "side must be an object of symbol: exponent");
  for (const auto& [k, x] : j.items()) {
    if (k == "log")
      v.log = json_rational(x);
    else
      v[symbol_from_string(k)] = json_rational(x);
  }
  return v;
}

}  // namespace detail

/// {"name": .., "lhs": {sym: exp}, "rhs": {sym: exp, "log": e}, "asymptotic": bool}
inline Relation relation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(errc::parse_error, "relation must be an object");
  return Relation::from_sides(j.value("name", std::string("R")), detail::json_side(j.value("lhs", nlohmann::json())),
                              detail::json_side(j.value("rhs", nlohmann::json())), j.value("asymptotic", false));
}

struct DerivationFile {
  std::string name;
  std::map<std::string, Relation> relations;
  Relation result;
  Derivation trail;
  std::map<std::string, Relation> bindings;
  std::vector<std::pair<std::string, bool>> expectations;  // (description, holds)

  bool all_expectations_hold() const {
    for (const auto& [d, ok] : expectations)
      if (!ok) return false;
    return true;
  }
};

/// Runs a declarative derivation:
///   {"name", "relations": [..], "steps": [{"op": "eliminate"|"scale"|"identify"|"normalize", ..}],
///    "expect": [{"solve": sym, "equals": "p/q"} | {"relation": {lhs, rhs}}]}
inline DerivationFile run_derivation(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("relations") || !j.contains("steps"))
    fail(errc::parse_error, "derivation needs 'relations' and 'steps'");
  DerivationFile out;
  out.name = j.value("name", std::string("derivation"));
  for (const auto& r : j["relations"]) {
    auto rel = relation_from_json(r);
    out.relations[rel.name] = rel;
    out.bindings[rel.name] = rel;
  }
  auto get = [&](const std::string& n) -> const Relation& {
    auto it = out.bindings.find(n);
    if (it == out.bindings.end()) fail(errc::parse_error, "unknown relation '" + n + "'");
    return it->second;
  };
  Relation cur;
  for (const auto& s : j["steps"]) {
    const std::string op = s.at("op").get<std::string>();
    Step st;
    st.op = op;
    if (op == "eliminate") {
      cur = eliminate(get(s.at("left").get<std::string>()), get(s.at("right").get<std::string>()),
                      symbol_from_string(s.at("symbol").get<std::string>()), &st);
    } else if (op == "scale") {
      const auto& r = get(s.at("rel").get<std::string>());
      Rational k = detail::json_rational(s.at("by"));
      cur = scale(r, k);
      st.inputs = {r.name};
      st.multipliers = {k};
      st.description = "raise to " + k.str();
      st.verified = detail::verify_combination({&r.v}, {k}, cur.v);
    } else if (op == "normalize") {
      const auto& r = get(s.at("rel").get<std::string>());
      cur = normalize(r);
      st.inputs = {r.name};
      st.description = "normalize";
      st.verified = true;
    } else if (op == "identify") {
      const auto& r = get(s.at("rel").get<std::string>());
      cur = identify(r, symbol_from_string(s.at("from").get<std::string>()), symbol_from_string(s.at("to").get<std::string>()));
      st.inputs = {r.name};
      st.description = "set " + s.at("from").get<std::string>() + " = " + s.at("to").get<std::string>();
      st.verified = true;
    } else {
      fail(errc::parse_error, "unknown step op '" + op + "'");
    }
    cur.name = s.value("as", cur.name);
    st.result = cur;
    out.bindings[cur.name] = cur;
    out.trail.steps.push_back(st);
  }
  out.result = cur;
  out.trail.result = cur;
  for (const auto& e : j.value("expect", nlohmann::json::array())) {
    const Relation& r = e.contains("of") ? get(e["of"].get<std::string>()) : out.result;
    if (e.contains("solve")) {
      Rational want = detail::json_rational(e.at("equals"));
      Rational got = solve(r, symbol_from_string(e["solve"].get<std::string>()));
      out.expectations.emplace_back(r.name + ": exponent of " + e["solve"].get<std::string>() + " = " + got.str() +
                                        " (expected " + want.str() + ")",
                                    got == want);
    } else if (e.contains("relation")) {
      auto want = relation_from_json(e["relation"]);
      bool same = normalize(want).v.c == normalize(r).v.c;
      out.expectations.emplace_back(r.name + ": " + r.str() + " matches " + want.str(), same);
    } else {
      fail(errc::parse_error, "expectation needs 'solve' or 'relation'");
    }
  }
  for (const auto& st : out.trail.steps)
    if (!st.verified) out.expectations.emplace_back("step '" + st.description + "' failed re-check", false);
  return out;
}

inline DerivationFile run_derivation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
  return run_derivation(j);
}

inline nlohmann::json to_json(const DerivationFile& f) {
  auto ex = nlohmann::json::array();
  for (const auto& [d, ok] : f.expectations) ex.push_back({{"check", d}, {"holds", ok}});
  return {{"name", f.name}, {"trail", to_json(f.trail)}, {"expectations", ex}, {"all_hold", f.all_expectations_hold()}};
}

// ---------------------------------------------------------------------------
// Built-in chains

namespace chains {

inline ExponentVector ev(std::initializer_list<std::pair<Symbol, Rational>> xs, Rational log = Rational()) {
  ExponentVector v;
  for (const auto& [s, x] : xs) v[s] = x;
  v.log = log;
  return v;
}

using S = Symbol;

/// K²⁸³M¹⁷⁶ ≳ |A|⁹⁴(|S_τ|τ²)^{41/2}|S_τ|⁴
inline Relation energy_form() {
  return Relation::from_sides("sliced_sumset", ev({{S::K, 283}, {S::M, 176}}),
                              ev({{S::A, 94}, {S::S_tau, Rational(49, 2)}, {S::tau, 41}}), true);
}
/// |S_τ|τ² ≳ |A|³/M
inline Relation layer_energy() {
  return Relation::from_sides("layer_energy", ev({{S::S_tau, 1}, {S::tau, 2}, {S::M, 1}}), ev({{S::A, 3}}), true);
}
/// M|A| ≥ T
inline Relation product_set_covers_T() {
  return Relation::from_sides("product_set_covers_T", ev({{S::M, 1}, {S::A, 1}}), ev({{S::T, 1}}));
}
/// T ≳ |A|⁶|S_τ|^{−1/2}M⁻⁴K⁻⁸ log⁻⁷|A|
inline Relation t_lower() {
  return Relation::from_sides("T_lower", ev({{S::T, 1}}),
                              ev({{S::A, 6}, {S::S_tau, Rational(-1, 2)}, {S::M, -4}, {S::K, -8}}, Rational(-7)), true);
}

/// |S_τ| ≥ |A|¹⁰M⁻¹⁰K⁻¹⁶ from the two T relations.
inline Derivation layer_size_bound() {
  auto d = combine({product_set_covers_T(), t_lower()}, {S::T});
  d.result.name = "layer_size";
  return d;
}

/// K⁶⁹⁴M⁴⁷³ ≳ |A|³⁹¹
inline Derivation sum_product() {
  auto size = layer_size_bound();
  auto d = combine({energy_form(), layer_energy(), size.result}, {S::tau, S::S_tau});
  d.steps.insert(d.steps.begin(), size.steps.begin(), size.steps.end());
  d.result.name = "sum_product";
  return d;
}

/// δ with max(K, M) ≥ |A|^δ, from K = M.
inline Rational sum_product_delta() { return solve(identify(sum_product().result, S::K, S::M), S::M); }

/// |AA+AA|² ≫ |A/A|^{2/3}|A|^{5/2}
inline Relation aa_slopes() {
  return Relation::from_sides("aa_slopes", ev({{S::AApAA, 2}}), ev({{S::AdivA, Rational(2, 3)}, {S::A, Rational(5, 2)}}));
}
/// |AA+AA|⁵ ≫ |A|¹³|A/A|⁻⁵ log^{−9/2}|A|
inline Relation aa_energy() {
  return Relation::from_sides("aa_energy", ev({{S::AApAA, 5}}), ev({{S::A, 13}, {S::AdivA, -5}}, Rational(-9, 2)));
}
/// |AA+AA|⁸⁰ ≳ |A|¹²⁷
inline Derivation aa_plus_aa() {
  auto d = combine({aa_slopes(), aa_energy()}, {S::AdivA});
  d.result.name = "aa_plus_aa";
  return d;
}

/// |A+A|¹⁹|Π₁|²²|Π₂|²² ≫ |A|⁴¹T³³ log⁻²³|A|, written with |A+A| = K|A|.
inline Relation two_products() {
  return Relation::from_sides("two_products", ev({{S::K, 19}, {S::A, 19}, {S::Pi1, 22}, {S::Pi2, 22}}),
                              ev({{S::A, 41}, {S::T, 33}}, Rational(-23)));
}
/// Π₁ = Π₂ = Π merges 22 + 22.
inline Relation single_product() {
  auto r = identify(two_products(), S::Pi2, S::Pi1);
  r.name = "single_product";
  return r;
}
/// Π₁ = Π₂ = T = |A|.
inline Relation convex_form() {
  auto r = identify(identify(identify(two_products(), S::Pi1, S::A), S::Pi2, S::A), S::T, S::A);
  r.name = "convex_form";
  return r;
}
/// Exponent of |A+A| = K|A| in the convex form.
inline Rational convex_exponent() { return solve(convex_form(), S::K) + Rational(1); }

/// Prior bound |A+A|³⁷|AA|⁸⁴ ≥ |A|⁷⁹T⁶³, with |A+A| = K|A| and |AA| = M|A|.
inline Relation prior_bound() {
  return Relation::from_sides("prior", ev({{S::K, 37}, {S::A, 121}, {S::M, 84}}), ev({{S::A, 79}, {S::T, 63}}), true);
}
/// The new bound with Π = AA, |Π| = M|A|.
inline Relation new_bound_aa() {
  auto r = identify(single_product(), S::Pi1, S::M);
  r.v[S::A] = r.v[S::A] + Rational(44);  // |Π|⁴⁴ = M⁴⁴|A|⁴⁴
  r.name = "new_with_AA";
  return r;
}
/// Monomial whose exceeding 1 makes the new bound on max(K, M) stronger.
inline ExponentVector max_bound_threshold() {
  return comparison_threshold(identify(new_bound_aa(), S::M, S::K), identify(prior_bound(), S::M, S::K), S::K);
}

}  // namespace chains

}  // namespace sumprod::exponents
