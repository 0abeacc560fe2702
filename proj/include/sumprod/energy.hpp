#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/numeric.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/report.hpp"
#include "sumprod/rset.hpp"
#include "sumprod/set_ops.hpp"

namespace sumprod {

/// Absolute error bound on each r^s term when s is not an integer.
inline constexpr double fractional_term_tolerance = 1e-12;

/// Σ_x r(x)^s for one pair of operands.
///
/// Integer exponents are summed exactly. Fractional exponents are summed in
/// 50-digit binary floating point, which keeps every term far inside the
/// documented per-term tolerance.
struct EnergyValue {
  Rational s;
  std::optional<BigInt> exact;
  BigFloat approx;
  double term_tolerance = 0.0;
  std::size_t terms = 0;
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  bool is_exact() const { return exact.has_value(); }
  std::string str() const { return exact ? exact->get_str() : decimal(approx, 20); }
};

namespace detail {

inline BigInt power_sum(const std::vector<std::uint64_t>& counts, unsigned long s) {
  if (s <= 3) {
    u128 acc = 0;
    bool ok = true;
    for (std::uint64_t c : counts) {
      if (c >= (std::uint64_t{1} << 40)) {
        ok = false;
        break;
      }
      u128 t = c;
      for (unsigned long i = 1; i < s; ++i) t *= c;
      acc += t;
      if (acc >> 120) {
        ok = false;
        break;
      }
    }
    if (ok) {
      BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(acc >> 64));
      BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(acc));
      return (hi << 64) + lo;
    }
  }
  BigInt acc = 0;
  for (std::uint64_t c : counts) acc += ipow(BigInt(static_cast<unsigned long>(c)), s);
  return acc;
}

}  // namespace detail

/// Energy of an explicit list of multiplicities.
inline EnergyValue energy_from_counts(const std::vector<std::uint64_t>& counts, const Rational& s) {
  if (s < Rational(1)) fail(errc::invalid_exponent, "energy exponent must be >= 1, got " + s.str());
  EnergyValue e;
  e.s = s;
  e.terms = counts.size();
  if (s.is_integer() && s.is_small()) {
    e.exact = detail::power_sum(counts, static_cast<unsigned long>(s.small_num()));
    e.approx = to_float(*e.exact);
  } else {
    BigFloat acc = 0;
    for (std::uint64_t c : counts) acc += rpow(BigFloat(c), s);
    e.approx = acc;
    e.term_tolerance = fractional_term_tolerance;
  }
  return e;
}

/// E_s(A, B) = Σ_x r_{A−B}(x)^s.
inline EnergyValue energy_s(const RSet& a, const RSet& b, const Rational& s) {
  if (s < Rational(1)) fail(errc::invalid_exponent, "energy exponent must be >= 1, got " + s.str());
  EnergyValue e = energy_from_counts(realisation_counts(a, b, Op::difference), s);
  e.left_size = a.size();
  e.right_size = b.size();
  return e;
}

inline EnergyValue energy_s(const RSet& a, const Rational& s) { return energy_s(a, a, s); }

inline BigInt additive_energy(const RSet& a, const RSet& b) { return *energy_s(a, b, Rational(2)).exact; }
inline BigInt additive_energy(const RSet& a) { return additive_energy(a, a); }
inline BigInt cubic_energy(const RSet& a, const RSet& b) { return *energy_s(a, b, Rational(3)).exact; }
inline BigInt cubic_energy(const RSet& a) { return cubic_energy(a, a); }

/// Multiplicative energy as Σ_λ r_{A/A}(λ)².
inline BigInt mult_energy(const RSet& a) {
  if (a.contains_zero()) fail(errc::zero_element, "multiplicative energy needs 0 ∉ A");
  return detail::power_sum(realisation_counts(a, a, Op::ratio), 2);
}

inline constexpr std::size_t quadruple_gate = 32;

/// Multiplicative energy by direct count of (a, b, c, d) ∈ A⁴ with ad = bc.
inline BigInt mult_energy_quadruples(const RSet& a) {
  if (a.contains_zero()) fail(errc::zero_element, "multiplicative energy needs 0 ∉ A");
  if (a.size() > quadruple_gate)
    fail(errc::scale_too_large, "quadruple count is gated to |A| <= " + std::to_string(quadruple_gate));
  const std::size_t n = a.size();
  std::vector<Rational> prod(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) prod[i * n + j] = a[i] * a[j];
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i)          // a
    for (std::size_t j = 0; j < n; ++j)        // b
      for (std::size_t k = 0; k < n; ++k)      // c
        for (std::size_t l = 0; l < n; ++l)    // d
          if (prod[i * n + l] == prod[j * n + k]) ++count;
  return BigInt(static_cast<unsigned long>(count));
}

/// D_k = {d ∈ A − B : r_{A−B}(d) ≥ k}.
inline RSet popular_differences(const RSet& a, const RSet& b, std::uint64_t k) {
  if (k < 1 || k > std::min(a.size(), b.size()))
    fail(errc::bad_threshold, "k must lie in [1, min(|A|,|B|)], got " + std::to_string(k));
  auto map = realisations(a, b, Op::difference);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map.counts()[i] >= k) out.push_back(map.values()[i]);
  return RSet::from_sorted_unique(std::move(out));
}

struct PopularSums {
  Rational eps;
  Rational threshold;  // ε|A|²/|A+A|
  RSet members;
  std::uint64_t mass = 0;  // Σ_{x ∈ members} r_{A+A}(x)
  std::uint64_t total = 0;  // |A|²

  /// mass ≥ (1 − ε)|A|²
  bool mass_bound_holds() const { return Rational(static_cast<std::int64_t>(mass)) >= (Rational(1) - eps) * Rational(static_cast<std::int64_t>(total)); }
};

inline void check_eps(const Rational& eps) {
  if (!(eps > Rational(0) && eps < Rational(1))) fail(errc::bad_eps, "eps must lie in (0,1), got " + eps.str());
}

/// Sums whose realisation count reaches ε|A|²/|A+A|.
inline PopularSums popular_sums(const RSet& a, const Rational& eps) {
  check_eps(eps);
  auto map = realisations(a, a, Op::sum);
  PopularSums p;
  p.eps = eps;
  p.total = static_cast<std::uint64_t>(a.size()) * a.size();
  p.threshold = eps * Rational(static_cast<std::int64_t>(p.total)) / Rational(static_cast<std::int64_t>(map.size()));
  std::vector<Rational> members;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (Rational(static_cast<std::int64_t>(map.counts()[i])) >= p.threshold) {
      members.push_back(map.values()[i]);
      p.mass += map.counts()[i];
    }
  }
  p.members = RSet::from_sorted_unique(std::move(members));
  return p;
}

/// Values whose multiplicity lies in [2^{j−1}, 2^j − 1].
struct DyadicLayer {
  unsigned j = 1;
  std::vector<Rational> members;
  std::vector<std::uint64_t> member_counts;
  BigInt weight;  // |members| · 2^{w j}

  std::uint64_t lower() const { return std::uint64_t{1} << (j - 1); }
  std::uint64_t upper() const { return (std::uint64_t{1} << j) - 1; }
  /// Lower end of the multiplicity range, so every count lies in [τ, 2τ).
  std::uint64_t tau() const { return lower(); }
  std::size_t size() const { return members.size(); }
};

struct DyadicDecomposition {
  std::vector<DyadicLayer> layers;  // non-empty layers, increasing j
  std::size_t dominant = 0;         // index into `layers`
  unsigned weight_exponent = 2;

  const DyadicLayer& dominant_layer() const { return layers.at(dominant); }
};

/// Partition the support of `map` by dyadic multiplicity. The dominant layer
/// maximises |S_j|·2^{w·j}; ties go to the smallest j.
inline DyadicDecomposition dyadic_decompose(const RealisationMap& map, unsigned weight_exponent = 2) {
  if (map.empty()) fail(errc::empty_set, "cannot decompose an empty realisation map");
  DyadicDecomposition d;
  d.weight_exponent = weight_exponent;
  std::vector<DyadicLayer> by_j(65);
  for (std::size_t i = 0; i < map.size(); ++i) {
    unsigned j = floor_log2(map.counts()[i]) + 1;
    by_j[j].j = j;
    by_j[j].members.push_back(map.values()[i]);
    by_j[j].member_counts.push_back(map.counts()[i]);
  }
  for (auto& layer : by_j) {
    if (layer.members.empty()) continue;
    layer.weight = BigInt(static_cast<unsigned long>(layer.members.size())) << (weight_exponent * layer.j);
    d.layers.push_back(std::move(layer));
  }
  for (std::size_t i = 1; i < d.layers.size(); ++i)
    if (d.layers[i].weight > d.layers[d.dominant].weight) d.dominant = i;
  return d;
}

/// Σ over layers of Σ r²; reproduces E₂ of the map exactly.
inline BigInt layer_reconstruction(const DyadicDecomposition& d) {
  BigInt acc = 0;
  for (const auto& layer : d.layers) acc += detail::power_sum(layer.member_counts, 2);
  return acc;
}

// ---------------------------------------------------------------------------
// Explicit-constant checks on a single set.

inline void require_positive(const RSet& a) {
  if (!a.is_positive()) fail(errc::non_positive, "set must consist of positive elements");
}

/// E^×(A) ≤ 4|A+A|²⌈log₂|A|⌉.
inline InequalityReport solymosi_check(const RSet& a) {
  require_positive(a);
  if (a.size() < 2) fail(errc::too_small, "needs |A| >= 2");
  BigInt ex = mult_energy(a);
  BigInt ss = sumset(a, a).size();
  BigInt rhs = 4 * ss * ss * ceil_log2(a.size());
  auto r = exact_check("solymosi", Rational(ex), Relation::le, Rational(rhs), "4|A+A|^2 ceil(log2|A|)", "explicit: 4");
  r.details = {{"mult_energy", ex.get_str()}, {"sumset_size", ss.get_str()}, {"ceil_log2", ceil_log2(a.size())}};
  return r;
}

/// E^×(A) ≥ |A|⁴/|AA|.
inline InequalityReport cauchy_schwarz_product_check(const RSet& a) {
  BigInt ex = mult_energy(a);
  BigInt n4 = ipow(BigInt(static_cast<unsigned long>(a.size())), 4);
  std::size_t aa = prodset(a, a).size();
  auto r = exact_check("cs_product", Rational(ex), Relation::ge, Rational(n4, BigInt(static_cast<unsigned long>(aa))), "|A|^4/|AA|",
                       "explicit: 1");
  r.details = {{"product_set_size", aa}};
  return r;
}

/// E^×(A) ≥ |A|⁴/|A/A|.
inline InequalityReport cauchy_schwarz_ratio_check(const RSet& a) {
  BigInt ex = mult_energy(a);
  BigInt n4 = ipow(BigInt(static_cast<unsigned long>(a.size())), 4);
  std::size_t q = ratioset(a, a).size();
  auto r = exact_check("cs_ratio", Rational(ex), Relation::ge, Rational(n4, BigInt(static_cast<unsigned long>(q))), "|A|^4/|A/A|",
                       "explicit: 1");
  r.details = {{"ratio_set_size", q}};
  return r;
}

/// |A+A|²|AA| ≥ |A|⁴ / (4⌈log₂|A|⌉), chaining the two checks above.
inline InequalityReport sum_product_chain_check(const RSet& a) {
  require_positive(a);
  if (a.size() < 2) fail(errc::too_small, "needs |A| >= 2");
  BigInt ss = sumset(a, a).size();
  BigInt pp = prodset(a, a).size();
  BigInt n4 = ipow(BigInt(static_cast<unsigned long>(a.size())), 4);
  BigInt den = 4 * BigInt(ceil_log2(a.size()));
  return exact_check("sum_product_chain", Rational(BigInt(ss * ss * pp)), Relation::ge, Rational(n4, den),
                     "|A|^4 / (4 ceil(log2|A|))", "explicit: 4 (energy upper bound times the product-set lower bound)");
}

/// E₂(A,B)² ≤ E₃(A,B)·|A||B| (Cauchy–Schwarz between moments).
inline InequalityReport moment_check(const RSet& a, const RSet& b) {
  BigInt e2 = additive_energy(a, b);
  BigInt e3 = cubic_energy(a, b);
  BigInt ab = BigInt(static_cast<unsigned long>(a.size())) * static_cast<unsigned long>(b.size());
  auto r = exact_check("energy_moments", Rational(BigInt(e2 * e2)), Relation::le, Rational(BigInt(e3 * ab)), "E3(A,B) |A||B|",
                       "explicit: 1");
  r.details = {{"E2", e2.get_str()}, {"E3", e3.get_str()}};
  return r;
}

/// Dominant layer of the ratio map carries |S_τ|·(2τ)² ≥ E^×(A)/(4⌈log₂|A|⌉).
inline InequalityReport dyadic_dominance_check(const RSet& a) {
  require_positive(a);
  if (a.size() < 2) fail(errc::too_small, "needs |A| >= 2");
  auto map = realisations(a, a, Op::ratio);
  auto d = dyadic_decompose(map, 2);
  BigInt ex = detail::power_sum(map.counts(), 2);
  const auto& dom = d.dominant_layer();
  auto r = exact_check("dyadic_dominance", Rational(dom.weight), Relation::ge,
                       Rational(ex, BigInt(4 * ceil_log2(a.size()))), "E^x(A) / (4 ceil(log2|A|))", "explicit: 4");
  r.details = {{"j", dom.j}, {"layer_size", dom.size()}, {"tau", dom.tau()}, {"layers", d.layers.size()}};
  return r;
}

/// E^×(A) against |Π₁|³|Π₂|³ log|Π₁| / T⁴, given r_{Π₁−Π₂}(a) ≥ T on A.
inline InequalityReport fpms_bound_report(const RSet& a, const RSet& p1, const RSet& p2, std::uint64_t t,
                                          LogBase base = LogBase::two) {
  if (a.contains_zero()) fail(errc::zero_element, "A must avoid 0");
  if (t < 1) fail(errc::bad_threshold, "T must be >= 1");
  auto diff = realisations(p1, p2, Op::difference);
  std::string violators;
  for (const auto& x : a) {
    if (diff.count(x) < t) violators += (violators.empty() ? "" : ", ") + x.str() + " (r=" + std::to_string(diff.count(x)) + ")";
  }
  if (!violators.empty()) fail(errc::hypothesis_failed, "r_{P1-P2}(a) < T for a = " + violators);
  BigInt ex = mult_energy(a);
  BigFloat rhs = BigFloat(p1.size()) * p1.size() * p1.size() * p2.size() * p2.size() * p2.size() * log_factor(p1.size(), base) /
                 boost::multiprecision::pow(BigFloat(t), 4);
  auto r = ratio_report("fpms_energy", ex.get_str(), to_float(ex), Relation::le, rhs, "|P1|^3 |P2|^3 log|P1| / T^4");
  r.details = {{"T", t},
               {"P1_size", p1.size()},
               {"P2_size", p2.size()},
               {"side_condition_P_at_least_A", p1.size() >= a.size() && p2.size() >= a.size()},
               {"log_base", std::string(to_string(base))}};
  return r;
}

}  // namespace sumprod
