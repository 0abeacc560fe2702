#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/energy.hpp"
#include "sumprod/incidence.hpp"

namespace sumprod {

/// Points of A×A on the line through the origin with slope λ.
struct SlopeClass {
  Rational lambda;
  RSet members;  // A_λ = A ∩ λ⁻¹A

  std::size_t tau() const { return members.size(); }
  std::vector<Point> points() const {
    std::vector<Point> out;
    for (const auto& a : members) out.push_back({a, lambda * a});
    return out;
  }
};

inline SlopeClass slope_class(const RSet& a, const Rational& lambda) {
  std::vector<Rational> m;
  for (const auto& x : a)
    if (a.contains(lambda * x)) m.push_back(x);
  return {lambda, RSet::from_sorted_unique(std::move(m))};
}

/// One class per λ ∈ A/A, in increasing slope order.
inline std::vector<SlopeClass> slope_classes(const RSet& a) {
  require_positive(a);
  std::vector<std::pair<Rational, Rational>> pairs;  // (λ, x) with λx ∈ A
  pairs.reserve(a.size() * a.size());
  for (const auto& x : a)
    for (const auto& y : a) pairs.emplace_back(y / x, x);
  std::sort(pairs.begin(), pairs.end());
  std::vector<SlopeClass> out;
  for (std::size_t i = 0; i < pairs.size();) {
    std::vector<Rational> m;
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) m.push_back(pairs[j++].second);
    out.push_back({pairs[i].first, RSet::from_sorted_unique(std::move(m))});
    i = j;
  }
  return out;
}

struct Bunch {
  std::vector<SlopeClass> classes;
  std::size_t size() const { return classes.size(); }
};

/// ⌊|S|/N⌋ bunches of N consecutive slopes; the short remainder is dropped.
inline std::vector<Bunch> partition_bunches(const RSet& a, const DyadicLayer& layer, std::uint64_t n) {
  if (n < 2 || n > layer.size())
    fail(errc::bad_n, "N = " + std::to_string(n) + " must lie in [2, " + std::to_string(layer.size()) + "]");
  std::vector<Bunch> out(layer.size() / n);
  for (std::size_t i = 0; i < out.size() * n; ++i) out[i / n].classes.push_back(slope_class(a, layer.members[i]));
  return out;
}

/// Sorted set of p + q with p on the first line and q on the second.
inline std::vector<Point> vector_sums(const SlopeClass& ci, const SlopeClass& cj) {
  if (ci.lambda == cj.lambda) fail(errc::same_slope, "vector sums need two distinct slopes");
  std::vector<Point> out;
  out.reserve(ci.tau() * cj.tau());
  for (const auto& x : ci.members)
    for (const auto& y : cj.members) out.push_back({x + y, ci.lambda * x + cj.lambda * y});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

inline void check_quadruple(const SlopeClass& c1, const SlopeClass& c2, const SlopeClass& c3, const SlopeClass& c4) {
  if (c1.lambda == c2.lambda) fail(errc::same_slope, "λ1 = λ2");
  if (c3.lambda == c4.lambda) fail(errc::degenerate_slopes, "λ3 = λ4");
  bool same = (c1.lambda == c3.lambda && c2.lambda == c4.lambda) || (c1.lambda == c4.lambda && c2.lambda == c3.lambda);
  if (same) fail(errc::degenerate_slopes, "{λ1, λ2} = {λ3, λ4}");
}

inline std::size_t intersection_size(const std::vector<Point>& x, const std::vector<Point>& y) {
  std::size_t n = 0;
  for (auto i = x.begin(), j = y.begin(); i != x.end() && j != y.end();) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else ++n, ++i, ++j;
  }
  return n;
}

}  // namespace detail

/// Common vector sums of the pairs (1,2) and (3,4), by set intersection.
inline std::uint64_t q_count_intersection(const SlopeClass& c1, const SlopeClass& c2, const SlopeClass& c3,
                                          const SlopeClass& c4) {
  detail::check_quadruple(c1, c2, c3, c4);
  return detail::intersection_size(vector_sums(c1, c2), vector_sums(c3, c4));
}

/// Same quantity by solving for a₃ and recovering a₄ = a₁ + a₂ − a₃.
inline std::uint64_t q_count_solutions(const SlopeClass& c1, const SlopeClass& c2, const SlopeClass& c3,
                                       const SlopeClass& c4) {
  detail::check_quadruple(c1, c2, c3, c4);
  const Rational den = c3.lambda - c4.lambda;
  const Rational u = (c1.lambda - c4.lambda) / den, v = (c2.lambda - c4.lambda) / den;
  std::uint64_t n = 0;
  for (const auto& a1 : c1.members)
    for (const auto& a2 : c2.members) {
      Rational a3 = u * a1 + v * a2;
      if (c3.members.contains(a3) && c4.members.contains(a1 + a2 - a3)) ++n;
    }
  return n;
}

inline std::uint64_t q_count(const SlopeClass& c1, const SlopeClass& c2, const SlopeClass& c3, const SlopeClass& c4) {
  return q_count_intersection(c1, c2, c3, c4);
}

struct QEntry {
  std::size_t i, j, k, l;  // bunch indices, i < j, k < l, (i,j) < (k,l)
  std::uint64_t q;
};

struct BunchStats {
  std::vector<Rational> slopes;
  std::vector<std::size_t> taus;
  std::uint64_t distinct_sums = 0;
  BigInt pair_products;   // Σ_{i<j} τ_i τ_j
  BigInt q_b;             // over ordered slope quadruples
  BigInt q_b_unordered;   // over unordered pairs of unordered pairs
  std::vector<QEntry> q_table;  // non-zero entries only
  bool sums_in_sumset_square = true;

  /// Inclusion–exclusion lower bound.
  bool inclusion_exclusion_holds() const { return BigInt(distinct_sums) >= pair_products - q_b; }

  std::size_t n = 0;
  std::vector<std::uint64_t> q_dense;  // symmetric, indexed by pair_index

  std::size_t pair_index(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return a * n - a * (a + 1) / 2 + (b - a - 1);
  }

  /// q for an ordered quadruple of bunch indices.
  std::uint64_t q(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    const std::size_t pairs = n * (n - 1) / 2;
    return q_dense[pair_index(a, b) * pairs + pair_index(c, d)];
  }
};

/// `all_sums` receives every vector sum of the bunch when given.
inline BunchStats bunch_stats(const Bunch& b, const RSet* sumset_of_a = nullptr, std::vector<Point>* all_sums = nullptr) {
  BunchStats st;
  const std::size_t n = b.size();
  st.n = n;
  for (const auto& c : b.classes) {
    st.slopes.push_back(c.lambda);
    st.taus.push_back(c.tau());
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<Point>> sums;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
      sums.push_back(vector_sums(b.classes[i], b.classes[j]));
      st.pair_products += BigInt(static_cast<unsigned long>(st.taus[i] * st.taus[j]));
    }
  std::vector<Point> merged;
  for (const auto& s : sums) merged.insert(merged.end(), s.begin(), s.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  st.distinct_sums = merged.size();
  if (sumset_of_a)
    for (const auto& p : merged)
      if (!sumset_of_a->contains(p.x) || !sumset_of_a->contains(p.y)) st.sums_in_sumset_square = false;
  if (all_sums) all_sums->insert(all_sums->end(), merged.begin(), merged.end());

  st.q_dense.assign(pairs.size() * pairs.size(), 0);
  for (std::size_t x = 0; x < pairs.size(); ++x)
    for (std::size_t y = x + 1; y < pairs.size(); ++y) {
      auto q = detail::intersection_size(sums[x], sums[y]);
      if (q == 0) continue;
      st.q_dense[x * pairs.size() + y] = st.q_dense[y * pairs.size() + x] = q;
      st.q_table.push_back({pairs[x].first, pairs[x].second, pairs[y].first, pairs[y].second, q});
      st.q_b_unordered += BigInt(static_cast<unsigned long>(q));
    }
  // Each unordered pair of pairs is seen 2·2·2 times as an ordered quadruple.
  st.q_b = st.q_b_unordered * 8;
  return st;
}

/// N = max(2, ⌈C K² M L / |A|⌉) with L the log factor of |A|.
inline std::uint64_t choose_N(const RSet& a, const Rational& c, LogBase base = LogBase::two) {
  if (c.sign() <= 0) fail(errc::bad_params, "C must be positive");
  const Rational n(static_cast<std::int64_t>(a.size()));
  const Rational k = Rational(static_cast<std::int64_t>(sumset(a, a).size())) / n;
  const Rational m = Rational(static_cast<std::int64_t>(prodset(a, a).size())) / n;
  BigInt v;
  if (base == LogBase::two) {
    Rational x = c * k * k * m * Rational(static_cast<std::int64_t>(std::max<unsigned>(1, ceil_log2(a.size())))) / n;
    v = x.ceil();
  } else {
    BigFloat x = to_float(c * k * k * m / n) * log_factor(a.size(), base);
    v = to_bigint(boost::multiprecision::ceil(x));
  }
  if (v < 2) return 2;
  return v.fits_ulong_p() ? v.get_ui() : UINT64_MAX;
}

/// r_{X/X}(λ) = |X ∩ λX|.
inline std::uint64_t ratio_count(const RSet& x, const Rational& lambda) {
  std::uint64_t n = 0;
  for (const auto& y : x) n += x.contains(lambda * y);
  return n;
}

constexpr std::size_t katz_koester_gate = 32;

inline InequalityReport katz_koester_check(const RSet& a) {
  require_positive(a);
  if (a.size() > katz_koester_gate)
    fail(errc::scale_too_large, "Katz-Koester check is gated to |A| <= " + std::to_string(katz_koester_gate));
  RSet aa = prodset(a, a);
  auto classes = slope_classes(a);
  std::uint64_t passing = 0;
  Rational worst;
  std::int64_t worst_margin = INT64_MAX;
  for (const auto& c : classes) {
    auto r = ratio_count(aa, c.lambda);
    auto rhs = prodset(a, c.members).size();
    auto margin = static_cast<std::int64_t>(r) - static_cast<std::int64_t>(rhs);
    if (margin >= 0) ++passing;
    if (margin < worst_margin) worst_margin = margin, worst = c.lambda;
  }
  auto rep = exact_check("katz_koester", Rational(static_cast<std::int64_t>(passing)), Relation::ge,
                         Rational(static_cast<std::int64_t>(classes.size())), "|A/A| slopes with r_{AA/AA} >= |A A_λ|",
                         "1");
  rep.details = {{"slopes", classes.size()}, {"tightest_slope", worst.str()}, {"tightest_margin", worst_margin}};
  return rep;
}

struct PipelineResult {
  std::string status = "ok";  // or "LayerTooThin"
  nlohmann::json summary = nlohmann::json::object();
  std::vector<InequalityReport> reports;
};

namespace detail {

inline nlohmann::json rationals_json(const std::vector<Rational>& v) {
  auto out = nlohmann::json::array();
  for (const auto& q : v) out.push_back(q.str());
  return out;
}

/// Dyadic layer of A_λ carrying the most solutions of a = u a₁ + v a₂.
struct PopularSubset {
  RSet members;
  std::uint64_t min_count = 0;
  std::uint64_t solutions = 0;
};

inline PopularSubset popular_subset(const SlopeClass& target, const SlopeClass& c1, const SlopeClass& c2, const Rational& u,
                                    const Rational& v) {
  std::map<Rational, std::uint64_t> r;
  for (const auto& a1 : c1.members)
    for (const auto& a2 : c2.members) {
      Rational a = u * a1 + v * a2;
      if (target.members.contains(a)) ++r[a];
    }
  std::map<unsigned, std::pair<std::vector<Rational>, std::uint64_t>> layers;
  for (const auto& [a, n] : r) {
    auto& l = layers[floor_log2(n)];
    l.first.push_back(a);
    l.second += n;
  }
  PopularSubset best;
  for (const auto& [j, l] : layers) {
    if (l.second <= best.solutions) continue;
    best.members = RSet::from_sorted_unique(l.first);
    best.solutions = l.second;
    best.min_count = std::uint64_t{1} << j;
  }
  return best;
}

}  // namespace detail

/// Slope-class machinery on a concrete set: dominant layer, bunches, collision
/// statistics, rich slopes and the per-slope product-set lower bound.
inline PipelineResult bunching_pipeline(const RSet& a, const Rational& c, LogBase base = LogBase::two) {
  require_positive(a);
  if (a.size() < 8) fail(errc::too_small, "pipeline needs |A| >= 8");
  PipelineResult res;
  auto& s = res.summary;
  const std::uint64_t n = a.size();
  const BigFloat L = log_factor(n, base);

  auto ratio_map = realisations(a, a, Op::ratio);
  auto decomposition = dyadic_decompose(ratio_map);
  const auto& layer = decomposition.dominant_layer();
  const std::uint64_t tau = layer.tau();
  BigInt ex = mult_energy(a);
  BigInt layer_mass = 0;
  for (auto cnt : layer.member_counts) layer_mass += BigInt(static_cast<unsigned long>(cnt)) * cnt;
  const BigInt s_tau2 = BigInt(static_cast<unsigned long>(layer.size())) * tau * tau;

  const RSet aplus = sumset(a, a), atimes = prodset(a, a);
  const Rational K(static_cast<std::int64_t>(aplus.size()), static_cast<std::int64_t>(n));
  const Rational M(static_cast<std::int64_t>(atimes.size()), static_cast<std::int64_t>(n));
  const std::uint64_t N = choose_N(a, c, base);

  s["A_size"] = n;
  s["K"] = K.str();
  s["M"] = M.str();
  s["C"] = c.str();
  s["N"] = N;
  s["mult_energy"] = ex.get_str();
  s["log_base"] = std::string(to_string(base));
  s["layer"] = {{"j", layer.j},
                {"tau", tau},
                {"size", layer.size()},
                {"slopes", detail::rationals_json(layer.members)},
                {"mass", layer_mass.get_str()},
                {"size_tau_squared_le_energy", s_tau2 <= ex},
                {"energy_le_4_size_tau_squared_log", BigFloat(to_float(ex)) <= 4 * to_float(s_tau2) * L}};
  s["N_below_sqrt_A"] = BigFloat(N) * N < BigFloat(n);

  // Σ_{λ∈S_τ} τ_λ² ≥ E^×/(4⌈log₂|A|⌉)
  auto mass_check = exact_check("dominant_layer_mass", Rational(layer_mass),
                                Relation::ge, Rational(ex, BigInt(4 * std::max<unsigned>(1, ceil_log2(n)))),
                                "E^x(A) / (4 ceil(log2|A|))", "4");
  res.reports.push_back(mass_check);

  if (layer.size() < N) {
    res.status = std::string(to_string(errc::layer_too_thin));
    s["status"] = res.status;
    s["reason"] = "|S_tau| = " + std::to_string(layer.size()) + " < N = " + std::to_string(N);
    return res;
  }

  auto bunches = partition_bunches(a, layer, N);
  const BigInt threshold_num = BigInt(static_cast<unsigned long>(N)) * N * tau * tau;  // Q_B threshold is this / 8
  std::vector<BunchStats> stats;
  std::vector<Point> every_sum;
  std::uint64_t per_bunch_total = 0, heavy = 0;
  s["bunches"] = nlohmann::json::array();
  for (std::size_t bi = 0; bi < bunches.size(); ++bi) {
    auto st = bunch_stats(bunches[bi], &aplus, &every_sum);
    per_bunch_total += st.distinct_sums;
    bool is_heavy = st.q_b * 8 > threshold_num;
    heavy += is_heavy;
    s["bunches"].push_back({{"index", bi},
                            {"slopes", detail::rationals_json(st.slopes)},
                            {"distinct_sums", st.distinct_sums},
                            {"pair_products", st.pair_products.get_str()},
                            {"Q_B", st.q_b.get_str()},
                            {"Q_B_unordered", st.q_b_unordered.get_str()},
                            {"threshold_N2tau2_over_8", Rational(threshold_num, BigInt(8)).str()},
                            {"heavy", is_heavy},
                            {"inclusion_exclusion_holds", st.inclusion_exclusion_holds()},
                            {"sums_in_sumset_square", st.sums_in_sumset_square}});
    auto ie = exact_check("inclusion_exclusion", Rational(static_cast<std::int64_t>(st.distinct_sums)), Relation::ge,
                          Rational(st.pair_products - st.q_b), "sum_{i<j} tau_i tau_j - Q_B", "1");
    ie.details = {{"bunch", bi}};
    res.reports.push_back(std::move(ie));
    stats.push_back(std::move(st));
  }
  std::sort(every_sum.begin(), every_sum.end());
  const auto global_distinct = std::unique(every_sum.begin(), every_sum.end()) - every_sum.begin();
  s["cross_bunch_sums_distinct"] = static_cast<std::uint64_t>(global_distinct) == per_bunch_total;
  res.reports.push_back(exact_check("cross_bunch_distinct", Rational(static_cast<std::int64_t>(global_distinct)), Relation::ge,
                                    Rational(static_cast<std::int64_t>(per_bunch_total)),
                                    "sum over bunches of distinct vector sums", "1"));
  s["heavy_bunches"] = heavy;

  const bool collision_branch = 2 * heavy > bunches.size();
  s["branch"] = collision_branch ? "collision" : "sparse";
  if (!collision_branch) {
    // Light bunches contribute disjoint sets of at least τ² C(N,2) − N²τ²/8 vector sums.
    const std::uint64_t light = bunches.size() - heavy;
    Rational per = Rational(BigInt(static_cast<unsigned long>(tau * tau)) * N * (N - 1), BigInt(2)) -
                   Rational(threshold_num, BigInt(8));
    Rational lhs(BigInt(static_cast<unsigned long>(aplus.size())) * aplus.size());
    auto r = exact_check("sparse_bunch_sumset", lhs, Relation::ge, per * Rational(static_cast<std::int64_t>(light)),
                         "#light bunches (tau^2 C(N,2) - N^2 tau^2 / 8)", "1");
    res.reports.push_back(r);
    s["status"] = res.status;
    return res;
  }

  // Rich λ₃ and their best witnesses (λ₁, λ₂, λ₄).
  const Rational S = Rational(static_cast<std::int64_t>(tau * tau), static_cast<std::int64_t>(2 * N * N));
  const Rational lambda_threshold(static_cast<std::int64_t>(tau * tau * N), 8);
  struct Rich {
    std::size_t bunch, k, i, j, l;
    std::uint64_t best;
  };
  std::vector<Rich> rich;
  s["Lambda_threshold"] = lambda_threshold.str();
  s["S"] = S.str();
  for (std::size_t bi = 0; bi < bunches.size(); ++bi) {
    const auto& st = stats[bi];
    if (st.q_b * 8 <= threshold_num) continue;
    std::size_t lambda_b = 0;
    for (std::size_t k = 0; k < N; ++k) {
      std::uint64_t marginal = 0;
      Rich best{bi, k, 0, 0, 0, 0};
      for (std::size_t l = 0; l < N; ++l) {
        if (l == k) continue;
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j < N; ++j) {
            if (i == j || (std::min(i, j) == std::min(k, l) && std::max(i, j) == std::max(k, l))) continue;
            auto q = st.q(i, j, k, l);
            marginal += q;
            if (q > best.best) best = {bi, k, i, j, l, q};
          }
      }
      if (Rational(static_cast<std::int64_t>(marginal)) <= lambda_threshold) continue;
      ++lambda_b;
      if (Rational(static_cast<std::int64_t>(best.best)) >= S) rich.push_back(best);
    }
    s["bunches"][bi]["Lambda_B_size"] = lambda_b;
  }
  s["S_prime_size"] = rich.size();
  s["S_prime_at_least_S_tau_over_64"] = 64 * rich.size() >= layer.size();

  // Per-slope product-set lower bound.
  const BigFloat An = n;
  BigFloat formula = boost::multiprecision::pow(An, 6) /
                     (boost::multiprecision::pow(to_float(M), 4) * boost::multiprecision::pow(to_float(K), 8) *
                      boost::multiprecision::sqrt(BigFloat(layer.size())) * boost::multiprecision::pow(L, 7));
  std::vector<Rational> s_prime;
  s["slopes"] = nlohmann::json::array();
  for (const auto& rc : rich) {
    const auto& cls = bunches[rc.bunch].classes;
    const auto &c3 = cls[rc.k], &c1 = cls[rc.i], &c2 = cls[rc.j], &c4 = cls[rc.l];
    s_prime.push_back(c3.lambda);
    const Rational den = c3.lambda - c4.lambda;
    auto pop = detail::popular_subset(c3, c1, c2, (c1.lambda - c4.lambda) / den, (c2.lambda - c4.lambda) / den);
    const std::size_t aa_lambda = prodset(a, c3.members).size();
    auto r = ratio_report("slope_product_lower_bound", std::to_string(aa_lambda), BigFloat(aa_lambda), Relation::ge,
                          formula, "|A|^6 / (M^4 K^8 |S_tau|^(1/2) log^7|A|)");
    r.details = {{"lambda", c3.lambda.str()}, {"witness", detail::rationals_json({c1.lambda, c2.lambda, c4.lambda})},
                 {"solutions", rc.best}};
    nlohmann::json js{{"lambda", c3.lambda.str()}, {"AA_lambda", aa_lambda}, {"solutions", rc.best}};
    if (!pop.members.empty()) {
      BigInt ep = mult_energy(pop.members);
      std::size_t app = prodset(a, pop.members).size();
      // |A A'|² E^×(A) E^×(A') ≥ |A|⁴ |A'|⁴ by Cauchy–Schwarz twice.
      BigInt lhs = BigInt(static_cast<unsigned long>(app)) * app * ex * ep;
      BigInt rhs = ipow(BigInt(static_cast<unsigned long>(n)), 4) * ipow(BigInt(static_cast<unsigned long>(pop.members.size())), 4);
      BigFloat T = to_float(S) / (2 * BigFloat(pop.members.size()) * L);
      BigFloat eal = boost::multiprecision::pow(BigFloat(tau), 6) * boost::multiprecision::pow(BigFloat(pop.members.size()), 4) *
                     boost::multiprecision::pow(L, 5) / boost::multiprecision::pow(to_float(S), 4);
      js["popular_subset"] = {{"size", pop.members.size()},
                              {"min_count", pop.min_count},
                              {"T", decimal(T)},
                              {"min_count_ge_T", BigFloat(pop.min_count) >= T},
                              {"mult_energy", ep.get_str()},
                              {"A_times_subset", app},
                              {"cauchy_schwarz_chain_holds", lhs >= rhs}};
      auto er = ratio_report("popular_subset_energy", ep.get_str(), to_float(ep), Relation::le, eal,
                             "tau^6 |A'|^4 log^5|A| / S^4");
      er.details = {{"lambda", c3.lambda.str()}};
      res.reports.push_back(er);
    }
    s["slopes"].push_back(js);
    res.reports.push_back(r);
  }

  // Vertical slice: the abscissa a₀ met by most lines with slope in S′.
  if (!s_prime.empty()) {
    RSet sp = RSet::from_unsorted(s_prime);
    Rational a0 = a[0];
    std::size_t best = 0;
    for (const auto& x : a) {
      std::size_t cnt = 0;
      for (const auto& lam : sp) cnt += a.contains(lam * x);
      if (cnt > best) best = cnt, a0 = x;
    }
    std::vector<Rational> bset;
    for (const auto& lam : sp)
      if (a.contains(lam * a0)) bset.push_back(lam);
    auto jb = nlohmann::json::array();
    for (const auto& b : bset) jb.push_back({{"b", b.str()}, {"r_AA_over_AA", ratio_count(atimes, b)}});
    s["slice"] = {{"a0", a0.str()},
                  {"B_size", bset.size()},
                  {"B_ge_tau_S_prime_over_A", BigInt(static_cast<unsigned long>(bset.size())) * n >=
                                                  BigInt(static_cast<unsigned long>(tau)) * sp.size()},
                  {"elements", jb}};
  }
  s["status"] = res.status;
  return res;
}

}  // namespace sumprod
