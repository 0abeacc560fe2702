#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sumprod/incidence.hpp"

namespace sumprod {

/// ε = 1/(2⌈log₂ n⌉), the choice used throughout the regularisation.
inline Rational default_eps(std::size_t n) {
  return Rational(1, 2 * static_cast<std::int64_t>(std::max<unsigned>(1, ceil_log2(n))));
}

/// Elements a with at least |A|/2 partners b such that a + b is ε-popular.
inline RSet rich_coordinates(const RSet& a, const Rational& eps) {
  auto pop = popular_sums(a, eps);
  std::vector<Rational> out;
  for (const auto& x : a) {
    std::size_t partners = 0;
    for (const auto& y : a) partners += pop.members.contains(x + y);
    if (2 * partners >= a.size()) out.push_back(x);
  }
  return RSet::from_sorted_unique(std::move(out));
}

enum class C2Reading { product, alternate };  // (1−2ε)e^{1−s} or 1 − 2ε e^{1−s}

struct RegularisationStep {
  std::size_t size;
  EnergyValue energy;
};

struct RegularisationTrace {
  Rational s, eps;
  Rational c2;            // rational lower approximation
  BigFloat c1;            // ε log₂|A|
  std::size_t initial_size = 0;
  std::vector<RegularisationStep> iterates;  // A_0, A_1, ..., B
  RSet final_set;
  RSet rich;              // R(B)
  EnergyValue final_energy, rich_energy;

  std::size_t iterations() const { return iterates.size() - 1; }
  unsigned iteration_cap() const { return floor_log2(initial_size); }

  /// |B| ≥ (1 − 2ε⌊log₂|A|⌋)|A|
  bool size_bound_holds() const {
    Rational lower = (Rational(1) - Rational(2) * eps * Rational(static_cast<std::int64_t>(iteration_cap()))) *
                     Rational(static_cast<std::int64_t>(initial_size));
    return Rational(static_cast<std::int64_t>(final_set.size())) >= lower;
  }
  bool energy_bound_holds() const;
};

namespace detail {

/// x < c·y, exactly when both energies are integers.
inline bool energy_below(const EnergyValue& x, const Rational& c, const EnergyValue& y) {
  if (x.exact && y.exact) return Rational(*x.exact) < c * Rational(*y.exact);
  return x.approx < to_float(c) * y.approx;
}

inline nlohmann::json energy_json(const EnergyValue& e) {
  return {{"value", e.str()}, {"exact", e.is_exact()}};
}

}  // namespace detail

inline bool RegularisationTrace::energy_bound_holds() const { return !detail::energy_below(rich_energy, c2, final_energy); }

inline Rational regularisation_c2(const Rational& s, const Rational& eps, C2Reading reading = C2Reading::product) {
  Rational e = rational_floor(boost::multiprecision::exp(to_float(Rational(1) - s)));
  return reading == C2Reading::product ? (Rational(1) - Rational(2) * eps) * e : Rational(1) - Rational(2) * eps * e;
}

/// Iterate A_{i+1} = R(A_i) while E_s(R(A_i)) < c₂ E_s(A_i).
inline RegularisationTrace regularise(const RSet& a, const Rational& s, const Rational& eps,
                                      C2Reading reading = C2Reading::product) {
  if (!(s > Rational(1))) fail(errc::bad_params, "s must exceed 1");
  if (!(eps > Rational(0) && eps < Rational(1, 2))) fail(errc::bad_params, "eps must lie in (0, 1/2)");
  if (a.size() < 2) fail(errc::bad_params, "regularisation needs |A| >= 2");
  if (Rational(2) * eps * Rational(static_cast<std::int64_t>(floor_log2(a.size()))) > Rational(1))
    fail(errc::bad_params, "2 eps floor(log2|A|) must not exceed 1");

  RegularisationTrace t;
  t.s = s;
  t.eps = eps;
  t.c2 = regularisation_c2(s, eps, reading);
  t.c1 = to_float(eps) * boost::multiprecision::log2(BigFloat(a.size()));
  t.initial_size = a.size();

  RSet cur = a;
  EnergyValue e = energy_s(cur, cur, s);
  t.iterates.push_back({cur.size(), e});
  for (;;) {
    RSet next = rich_coordinates(cur, eps);
    EnergyValue en = energy_s(next, next, s);
    if (!detail::energy_below(en, t.c2, e)) {
      t.final_set = cur;
      t.final_energy = e;
      t.rich = next;
      t.rich_energy = en;
      return t;
    }
    cur = std::move(next);
    e = std::move(en);
    t.iterates.push_back({cur.size(), e});
  }
}

inline nlohmann::json to_json(const RegularisationTrace& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.iterates.size(); ++i)
    rows.push_back({{"i", i}, {"size", t.iterates[i].size}, {"energy", t.iterates[i].energy.str()}});
  BigFloat n = t.initial_size, k = t.iterations();
  return {{"s", t.s.str()},
          {"eps", t.eps.str()},
          {"c1", decimal(t.c1)},
          {"c2", t.c2.str()},
          {"c2_decimal", decimal(t.c2)},
          {"iterates", rows},
          {"iterations", t.iterations()},
          {"iteration_cap", t.iteration_cap()},
          {"B_size", t.final_set.size()},
          {"R_B_size", t.rich.size()},
          {"E_B", detail::energy_json(t.final_energy)},
          {"E_R_B", detail::energy_json(t.rich_energy)},
          {"size_bound_holds", t.size_bound_holds()},
          {"energy_bound_holds", t.energy_bound_holds()},
          {"bound_one_minus_eps_pow", decimal(boost::multiprecision::pow(1 - to_float(t.eps), k) * n)},
          {"bound_one_minus_2eps_pow", decimal(boost::multiprecision::pow(1 - 2 * to_float(t.eps), k) * n)}};
}

/// Dyadic layer of X − X maximising Δ²|D|, with counts in [Δ, 2Δ).
struct DifferenceLayer {
  RSet d;
  std::uint64_t delta = 1;
  std::size_t layers = 0;  // non-empty layers in the decomposition
  BigInt energy;           // E₂(X)

  BigInt weight() const { return BigInt(static_cast<unsigned long>(d.size())) * delta * delta; }
  /// E₂ ≤ 4 L Δ²|D| with L the number of non-empty layers.
  bool energy_bound_holds() const { return energy <= weight() * 4 * static_cast<unsigned long>(layers); }
};

inline DifferenceLayer dominant_difference_layer(const RSet& x) {
  if (x.size() < 2) fail(errc::too_small, "difference layer needs |X| >= 2");
  auto map = realisations(x, x, Op::difference);
  auto dec = dyadic_decompose(map);
  const auto& layer = dec.dominant_layer();
  DifferenceLayer out;
  out.d = RSet::from_sorted_unique(layer.members);
  out.delta = layer.tau();
  out.layers = dec.layers.size();
  out.energy = energy_from_counts(map.counts(), Rational(2)).exact.value();
  return out;
}

struct TruismRestriction {
  RSet r_set;  // r, s range over this set
  RSet d;      // r − s ∈ D
  RSet p;      // b + r ∈ P
};

struct TruismCount {
  BigInt q;         // Σ_σ r(σ)²
  BigInt e3;        // E₃(B)
  std::uint64_t triples = 0;
  std::uint64_t classes = 0;
  bool bound_holds() const { return q <= e3; }
};

constexpr std::size_t truism_gate = 20;

/// Classes of (r, s, b) under (r,s,b) ~ (r+t, s+t, b−t), keyed by (r−s, b+r, b+s).
inline TruismCount truism_class_bound(const RSet& b, const std::optional<TruismRestriction>& restrict = std::nullopt,
                                      std::size_t gate = truism_gate) {
  if (b.size() > gate) fail(errc::scale_too_large, "truism enumeration is gated to |B| <= " + std::to_string(gate));
  const RSet& rs = restrict ? restrict->r_set : b;
  struct KeyHash {
    std::size_t operator()(const std::array<Rational, 3>& k) const {
      return detail::mix64(k[0].hash() ^ detail::mix64(k[1].hash() ^ detail::mix64(k[2].hash())));
    }
  };
  std::unordered_map<std::array<Rational, 3>, std::uint64_t, KeyHash> classes;
  TruismCount out;
  for (const auto& r : rs)
    for (const auto& s : rs) {
      Rational d = r - s;
      if (restrict && !restrict->d.contains(d)) continue;
      for (const auto& x : b) {
        if (restrict && !restrict->p.contains(x + r)) continue;
        ++classes[{d, x + r, x + s}];
        ++out.triples;
      }
    }
  for (const auto& [k, n] : classes) out.q += BigInt(static_cast<unsigned long>(n)) * n;
  out.classes = classes.size();
  out.e3 = cubic_energy(b);
  return out;
}

enum class SumsetBranch { general, convex };

namespace detail {

inline BigInt pow_size(std::size_t n, unsigned long e) { return ipow(BigInt(static_cast<unsigned long>(n)), e); }

}  // namespace detail

/// Lower bound on |A+A| through regularisation and the truism d = x − y;
/// every intermediate quantity of the argument is surfaced in `details`.
inline InequalityReport regularised_sumset_report(const RSet& a, const RSet& p1, const RSet& p2, std::uint64_t t,
                                                  SumsetBranch branch, LogBase base = LogBase::two) {
  using boost::multiprecision::pow;
  if (a.size() < 4) fail(errc::too_small, "needs |A| >= 4");
  if (branch == SumsetBranch::general) {
    if (a.contains_zero() || p1.contains_zero() || p2.contains_zero()) fail(errc::zero_element, "sets must avoid 0");
    if (p1.size() < a.size() || p2.size() < a.size()) fail(errc::hypothesis_failed, "needs |P1|, |P2| >= |A|");
    detail::require_product_hypothesis(a, p1, p2, t);
  } else if (!is_convex(a)) {
    fail(errc::hypothesis_failed, "A is not convex");
  }

  const BigFloat L = log_factor(a.size(), base);
  const RSet apa = sumset(a, a);
  InequalityReport rep;
  nlohmann::json det;
  // The convex branch runs the same chain with |P1| = |P2| = T = |A|.
  const BigFloat P1 = branch == SumsetBranch::general ? BigFloat(p1.size()) : BigFloat(a.size());
  const BigFloat P2 = branch == SumsetBranch::general ? BigFloat(p2.size()) : BigFloat(a.size());
  const BigFloat T = branch == SumsetBranch::general ? BigFloat(t) : BigFloat(a.size());

  if (branch == SumsetBranch::general) {
    BigInt lhs = detail::pow_size(apa.size(), 19) * detail::pow_size(p1.size(), 22) * detail::pow_size(p2.size(), 22);
    BigFloat rhs = pow(BigFloat(a.size()), 41) * pow(BigFloat(t), 33) / pow(L, 23);
    rep = ratio_report("sumset_product_bound", lhs.get_str(), to_float(lhs), Relation::ge, rhs,
                       "|A|^41 T^33 log^-23|A|  (lhs = |A+A|^19 |P1|^22 |P2|^22)");
  } else {
    BigFloat rhs = rpow(BigFloat(a.size()), Rational(30, 19)) / rpow(L, Rational(23, 19));
    rep = ratio_report("convex_sumset_bound", std::to_string(apa.size()), BigFloat(apa.size()), Relation::ge, rhs,
                       "|A|^(30/19) log^(-23/19)|A|");
  }

  // Regularisation with s = 2 and the popular-sum rule.
  const Rational eps = default_eps(a.size());
  auto trace = regularise(a, Rational(2), eps);
  const RSet& bset = trace.final_set;
  const RSet& rb = trace.rich;
  auto pop = popular_sums(bset, eps);
  auto layer = dominant_difference_layer(rb);
  const RSet bpb = sumset(bset, bset);
  const BigInt e2b = additive_energy(bset);
  const BigInt e3b = cubic_energy(bset);
  det["regularisation"] = to_json(trace);
  det["P_eps_B_size"] = pop.members.size();
  det["D_size"] = layer.d.size();
  det["Delta"] = layer.delta;
  det["D_energy_bound_holds"] = layer.energy_bound_holds();
  det["E2_B"] = e2b.get_str();
  det["E3_B"] = e3b.get_str();
  det["B_plus_B_size"] = bpb.size();

  // Every b ∈ R(B) has ≥ |B|/2 partners with popular sum.
  bool partners_ok = true;
  for (const auto& r : rb) {
    std::size_t n = 0;
    for (const auto& x : bset) n += pop.members.contains(r + x);
    partners_ok = partners_ok && 2 * n >= bset.size();
  }
  det["rich_partner_property"] = partners_ok;

  // Solutions of r − s = (b+r) − (b+s) with r − s ∈ D and b + r ∈ P_ε(B).
  TruismCount truism = truism_class_bound(bset, TruismRestriction{rb, layer.d, pop.members}, SIZE_MAX);
  det["truism_solutions"] = truism.triples;
  det["truism_solutions_over_D_Delta_B"] =
      ratio_string(BigFloat(truism.triples), BigFloat(layer.d.size()) * layer.delta * bset.size());
  det["truism_Q"] = truism.q.get_str();
  det["truism_Q_le_E3"] = truism.bound_holds();

  // |{x − y = d : x ∈ P_ε(B), y ∈ B+B, d ∈ D}|
  auto diffs = realisations(pop.members, bpb, Op::difference);
  std::uint64_t nsol = 0;
  for (const auto& d : layer.d) nsol += diffs.count(d);
  det["popular_difference_solutions"] = nsol;
  const BigFloat A = a.size(), B = bset.size(), D = layer.d.size(), Dl = layer.delta, E = to_float(eps);
  BigFloat top_lhs = A * A * D * D * Dl * Dl;
  det["chain_top_ratio"] = ratio_string(top_lhs, to_float(e3b) * nsol);

  // |D|^{7/6}Δ² and Δ against their core expressions.
  BigFloat pen_lhs = rpow(D, Rational(7, 6)) * Dl * Dl;
  BigFloat pen_rhs = rpow(E, Rational(-7, 3)) * pow(P1, 3) * pow(P2, 3) * rpow(B, Rational(-3, 2)) *
                     rpow(BigFloat(bpb.size()), Rational(5, 3)) * rpow(T, Rational(-9, 2));
  det["pen_ratio"] = ratio_string(pen_lhs, pen_rhs);
  BigFloat delta_rhs = P1 * P1 * P2 * P2 * B * B / (E * pow(T, 3) * to_float(e2b));
  det["delta_upper_ratio"] = ratio_string(Dl, delta_rhs);

  if (branch == SumsetBranch::general) {
    try {
      DiffBoundInput in{bset, bset, {}, Rational(3), p1, p2, t};
      det["cubic_energy_report"] = to_json(difference_bound_report(DiffBound::cubic, in, base));
    } catch (const error& e) {
      det["cubic_energy_report"] = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
  } else {
    det["cubic_energy_convex_ratio"] = ratio_string(to_float(e3b), B * B * B * L);
  }
  det["branch"] = branch == SumsetBranch::general ? "general" : "convex";
  det["log_base"] = std::string(to_string(base));
  if (branch == SumsetBranch::general) det["T"] = t;
  rep.details = std::move(det);
  return rep;
}

/// (A, A/A, |A|): every a = b·(a/b), so each a has |A| representations.
struct ProductCover {
  RSet p1, p2;
  std::uint64_t t;
};

inline ProductCover standard_product_cover(const RSet& a) { return {a, ratioset(a, a), a.size()}; }

}  // namespace sumprod
