#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/bunching.hpp"
#include "sumprod/regularise.hpp"

namespace sumprod {

constexpr std::size_t aa_plus_aa_gate = 128;

struct DotProductSet {
  RSet a, aa, aa_plus_aa;
  double seconds = 0;
};

inline DotProductSet aa_plus_aa(const RSet& a) {
  if (a.size() > aa_plus_aa_gate)
    fail(errc::scale_too_large, "AA+AA is gated to |A| <= " + std::to_string(aa_plus_aa_gate));
  auto t0 = std::chrono::steady_clock::now();
  DotProductSet d;
  d.a = a;
  d.aa = prodset(a, a);
  d.aa_plus_aa = sumset(d.aa, d.aa);
  d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

/// Slope class whose points are the dilates a·v_λ, a ∈ A, of one fixed vector
/// v_λ = (a_λ, λ a_λ) with a_λ the smallest element of A_λ.
inline SlopeClass dilate_class(const RSet& a, const Rational& lambda) {
  auto cls = slope_class(a, lambda);
  if (cls.members.empty()) fail(errc::bad_params, lambda.str() + " is not in A/A");
  return {lambda, dilate(a, cls.members.min())};
}

struct BalogResult {
  std::size_t slopes = 0;
  std::uint64_t total_sums = 0;         // Σ over consecutive pairs
  bool all_in_square = true;            // every sum in (AA+AA)²
  bool slopes_between = true;           // each sum strictly between its two slopes
  std::optional<bool> globally_distinct;  // checked by dedup when small enough
  InequalityReport baseline;            // |AA+AA|² ≥ total
};

constexpr std::uint64_t balog_dedup_limit = std::uint64_t{1} << 21;

inline BalogResult balog_construction(const RSet& a) {
  require_positive(a);
  auto dp = aa_plus_aa(a);
  auto lambdas = ratioset(a, a);
  BalogResult res;
  res.slopes = lambdas.size();
  std::vector<SlopeClass> cls;
  for (const auto& l : lambdas) cls.push_back(dilate_class(a, l));
  const bool dedup = (lambdas.size() - 1) * a.size() * a.size() <= balog_dedup_limit;
  std::vector<Point> all;
  for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
    auto sums = vector_sums(cls[i], cls[i + 1]);
    res.total_sums += sums.size();
    for (const auto& p : sums) {
      if (!dp.aa_plus_aa.contains(p.x) || !dp.aa_plus_aa.contains(p.y)) res.all_in_square = false;
      Rational s = p.y / p.x;
      if (!(cls[i].lambda < s && s < cls[i + 1].lambda)) res.slopes_between = false;
    }
    if (dedup) all.insert(all.end(), sums.begin(), sums.end());
  }
  if (dedup) {
    std::sort(all.begin(), all.end());
    res.globally_distinct = static_cast<std::uint64_t>(std::unique(all.begin(), all.end()) - all.begin()) == res.total_sums;
  }
  const auto m = dp.aa_plus_aa.size();
  res.baseline = exact_check("balog_baseline", Rational(BigInt(static_cast<unsigned long>(m)) * m), Relation::ge,
                             Rational(static_cast<std::int64_t>(res.total_sums)), "(|A/A| - 1)|A|^2", "1");
  return res;
}

constexpr std::size_t aa_bunch_gate = 24;

/// |AA+AA|² against |A/A|^{2/3}|A|^{5/2}, with the Balog baseline and the
/// bunch statistics over all of A/A.
inline InequalityReport aa_plus_aa_slope_report(const RSet& a, const Rational& c = Rational(1)) {
  require_positive(a);
  auto dp = aa_plus_aa(a);
  const RSet lambdas = ratioset(a, a);
  const BigFloat A = a.size(), Q = lambdas.size();
  const std::uint64_t m = dp.aa_plus_aa.size();
  BigInt lhs = BigInt(static_cast<unsigned long>(m)) * m;
  BigFloat rhs = rpow(Q, Rational(2, 3)) * rpow(A, Rational(5, 2));
  auto rep = ratio_report("aa_plus_aa_slope_bound", lhs.get_str(), to_float(lhs), Relation::ge, rhs,
                          "|A/A|^(2/3) |A|^(5/2)  (lhs = |AA+AA|^2)");
  auto balog = balog_construction(a);
  nlohmann::json det{{"AA_size", dp.aa.size()},
                     {"AA_plus_AA_size", m},
                     {"ratio_set_size", lambdas.size()},
                     {"balog", {{"total_sums", balog.total_sums},
                                {"all_in_square", balog.all_in_square},
                                {"slopes_between", balog.slopes_between},
                                {"baseline", to_json(balog.baseline)}}}};
  if (balog.globally_distinct) det["balog"]["globally_distinct"] = *balog.globally_distinct;

  // N = max(2, ⌈C |AA+AA|² / (|A|² |A/A|)⌉)
  Rational nr = c * Rational(lhs) / Rational(BigInt(static_cast<unsigned long>(a.size() * a.size() * lambdas.size())));
  BigInt nb = nr.ceil();
  const std::uint64_t n = nb < 2 ? 2 : nb.get_ui();
  det["N"] = n;
  det["C"] = c.str();
  if (a.size() > aa_bunch_gate) {
    det["bunches"] = "skipped: |A| above " + std::to_string(aa_bunch_gate);
  } else if (n > lambdas.size()) {
    det["bunches"] = "LayerTooThin";
  } else {
    auto arr = nlohmann::json::array();
    for (std::size_t start = 0; start + n <= lambdas.size(); start += n) {
      Bunch b;
      for (std::size_t i = start; i < start + n; ++i) b.classes.push_back(dilate_class(a, lambdas[i]));
      auto st = bunch_stats(b, &dp.aa_plus_aa);
      arr.push_back({{"first_slope", lambdas[start].str()},
                     {"distinct_sums", st.distinct_sums},
                     {"Q_B", st.q_b.get_str()},
                     {"inclusion_exclusion_holds", st.inclusion_exclusion_holds()},
                     {"sums_in_square", st.sums_in_sumset_square}});
    }
    det["bunches"] = arr;
  }
  rep.details = std::move(det);
  return rep;
}

constexpr std::size_t aa_energy_gate = 64;

/// |AA+AA|⁵ against |A|¹³|A/A|⁻⁵ log^{−9/2}|A| through the difference layer of A − A.
inline InequalityReport aa_plus_aa_energy_report(const RSet& a, LogBase base = LogBase::two) {
  using boost::multiprecision::pow;
  require_positive(a);
  if (a.size() > aa_energy_gate) fail(errc::scale_too_large, "gated to |A| <= " + std::to_string(aa_energy_gate));
  if (a.size() < 2) fail(errc::too_small, "needs |A| >= 2");
  auto dp = aa_plus_aa(a);
  const RSet lambdas = ratioset(a, a), apa = sumset(a, a), a_apa = prodset(a, apa), inv = reciprocals(a);
  const BigFloat A = a.size(), Q = lambdas.size(), L = log_factor(a.size(), base);
  const std::uint64_t m = dp.aa_plus_aa.size();

  BigInt lhs = detail::pow_size(m, 5);
  BigFloat rhs = pow(A, 13) / (pow(Q, 5) * rpow(L, Rational(9, 2)));
  auto rep = ratio_report("aa_plus_aa_energy_bound", lhs.get_str(), to_float(lhs), Relation::ge, rhs,
                          "|A|^13 |A/A|^-5 log^(-9/2)|A|  (lhs = |AA+AA|^5)");

  auto layer = dominant_difference_layer(a);
  auto diff = realisations(a, a, Op::difference);
  std::uint64_t layer_pairs = 0;
  for (const auto& d : layer.d) layer_pairs += diff.count(d);
  auto xy = realisations(apa, apa, Op::difference);
  std::uint64_t nsol = 0;
  for (const auto& d : layer.d) nsol += xy.count(d);
  const BigInt e2 = layer.energy, e3 = cubic_energy(a);

  // (|A| Σ_{d∈D} r(d))² ≤ E₃(A) · |{x − y = d}|, by Cauchy–Schwarz over shift classes.
  BigInt sol = BigInt(static_cast<unsigned long>(a.size())) * layer_pairs;
  auto cs = exact_check("truism_cauchy_schwarz", Rational(sol * sol), Relation::le, Rational(e3 * nsol),
                        "E3(A) |{x - y = d : x, y in A+A, d in D}|", "1");

  DiffBoundInput solutions{apa, apa, layer.d, Rational(3), inv, a_apa, a.size()};
  DiffBoundInput cubic{a, a, {}, Rational(3), a, lambdas, a.size()};
  const BigFloat Dl = layer.delta, E = to_float(e2);
  nlohmann::json det{{"AA_plus_AA_size", m},
                     {"ratio_set_size", lambdas.size()},
                     {"A_plus_A_size", apa.size()},
                     {"A_times_A_plus_A_size", a_apa.size()},
                     {"D_size", layer.d.size()},
                     {"Delta", layer.delta},
                     {"E2", e2.get_str()},
                     {"E3", e3.get_str()},
                     {"difference_solutions", nsol},
                     {"truism_cauchy_schwarz", to_json(cs)},
                     {"difference_solutions_report", to_json(difference_bound_report(DiffBound::solutions, solutions, base))},
                     {"cubic_energy_report", to_json(difference_bound_report(DiffBound::cubic, cubic, base))},
                     {"delta_upper_ratio", ratio_string(Dl, A * Q * Q * L / E)},
                     {"final_chain_ratio",
                      ratio_string(rpow(A, Rational(1, 3)) * E,
                                   rpow(Q, Rational(5, 3)) * rpow(BigFloat(apa.size()), Rational(1, 3)) *
                                       rpow(BigFloat(a_apa.size()), Rational(1, 3)) * rpow(L, Rational(3, 2)))},
                     {"log_base", std::string(to_string(base))}};
  rep.details = std::move(det);
  return rep;
}

}  // namespace sumprod
