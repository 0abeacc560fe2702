#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>

#include "sumprod/aaaa.hpp"
#include "sumprod/bunching.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/generators.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/regularise.hpp"

namespace sumprod::harness {

constexpr int schema_version = 1;

struct CheckParams {
  Rational c{1};                // bunch-size constant
  std::optional<Rational> eps;  // regularisation ε; default 1/(2⌈log₂|A|⌉)
  LogBase base = LogBase::two;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    return {{"C", c.str()}, {"eps", eps ? eps->str() : "default"}, {"log_base", std::string(to_string(base))}, {"seed", seed}};
  }
};

struct CheckDef {
  std::string id;
  std::string statement;  // what is checked, in words
  bool asserted = false;  // explicit constant: pass/fail; otherwise report-only
  std::size_t min_n = 1, max_n = SIZE_MAX;
  bool needs_positive = false, needs_convex = false;
  std::function<std::vector<InequalityReport>(const RSet&, const CheckParams&)> run;

  /// Reason the set is out of scope, if any.
  std::optional<std::string> gate(const RSet& a) const {
    if (a.size() < min_n) return "needs |A| >= " + std::to_string(min_n);
    if (a.size() > max_n) return "gated to |A| <= " + std::to_string(max_n);
    if (needs_positive && !a.is_positive()) return "needs a positive set";
    if (needs_convex && (a.size() < 3 || !is_convex(a))) return "needs a convex set";
    return std::nullopt;
  }
};

namespace detail {

inline std::vector<InequalityReport> one(InequalityReport r) { return {std::move(r)}; }

inline Rational size_r(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

inline std::vector<InequalityReport> identities(const RSet& a) {
  std::vector<InequalityReport> out;
  auto ratios = realisations(a, a, Op::ratio);
  const Rational n2 = size_r(a.size()) * size_r(a.size());
  auto sum = exact_check("ratio_count_sum", Rational(static_cast<std::int64_t>(ratios.total())), Relation::ge, n2, "|A|^2",
                         "identity");
  sum.verdict = ratios.total() == a.size() * a.size() ? Verdict::pass : Verdict::fail;
  out.push_back(sum);
  // E^x two ways: directly on quadruples when small, through AA otherwise.
  const bool small = a.size() <= quadruple_gate;
  const BigInt sq = sumprod::detail::power_sum(ratios.counts(), 2),
               ex = small ? mult_energy_quadruples(a)
                          : sumprod::detail::power_sum(realisation_counts(a, a, Op::product), 2);
  auto r2 = exact_check("ratio_square_sum", Rational(sq), Relation::ge, Rational(ex),
                        small ? "E^x(A) by quadruples" : "sum of r_AA(x)^2", "identity");
  r2.verdict = sq == ex ? Verdict::pass : Verdict::fail;
  out.push_back(r2);
  auto diffs = realisations(a, a, Op::difference);
  const BigInt layered = layer_reconstruction(dyadic_decompose(diffs, 2)), e2 = additive_energy(a);
  auto lr = exact_check("layer_reconstruction", Rational(layered), Relation::ge, Rational(e2), "E2(A)", "identity");
  lr.verdict = layered == e2 ? Verdict::pass : Verdict::fail;
  out.push_back(lr);
  const auto sol = count_difference_solutions(a, a, diffset(a, a));
  auto ds = exact_check("difference_solutions_identity", size_r(sol), Relation::ge, n2, "|A||B| with C = A - B", "identity");
  ds.verdict = sol == a.size() * a.size() ? Verdict::pass : Verdict::fail;
  out.push_back(ds);
  return out;
}

/// Both q algorithms over every admissible quadruple of dominant-layer slopes,
/// plus seeded random quadruples over all of A/A.
inline std::vector<InequalityReport> q_agreement(const RSet& a, std::uint64_t seed) {
  auto classes = slope_classes(a);
  auto layer = dyadic_decompose(realisations(a, a, Op::ratio)).dominant_layer();
  std::vector<SlopeClass> dom;
  for (const auto& l : layer.members) dom.push_back(slope_class(a, l));
  std::uint64_t checked = 0, mismatches = 0;
  auto test = [&](const SlopeClass& c1, const SlopeClass& c2, const SlopeClass& c3, const SlopeClass& c4) {
    if (c1.lambda == c2.lambda || c3.lambda == c4.lambda) return;
    if ((c1.lambda == c3.lambda && c2.lambda == c4.lambda) || (c1.lambda == c4.lambda && c2.lambda == c3.lambda)) return;
    ++checked;
    mismatches += q_count_intersection(c1, c2, c3, c4) != q_count_solutions(c1, c2, c3, c4);
  };
  SplitMix64 rng(seed);
  if (dom.size() <= 10) {
    for (const auto& c1 : dom)
      for (const auto& c2 : dom)
        for (const auto& c3 : dom)
          for (const auto& c4 : dom) test(c1, c2, c3, c4);
  } else {
    auto pick = [&]() -> const SlopeClass& { return dom[rng.below(dom.size())]; };
    for (int i = 0; i < 5000; ++i) test(pick(), pick(), pick(), pick());
  }
  for (int i = 0; i < 2000 && classes.size() >= 3; ++i) {
    auto pick = [&]() -> const SlopeClass& { return classes[rng.below(classes.size())]; };
    test(pick(), pick(), pick(), pick());
  }
  auto r = exact_check("q_count_agreement", size_r(0), Relation::ge, size_r(mismatches), "number of disagreeing quadruples",
                       "identity");
  r.details = {{"quadruples", checked}, {"dominant_slopes", dom.size()}};
  return {r};
}

inline std::vector<InequalityReport> regularisation(const RSet& a, const CheckParams& p) {
  std::vector<InequalityReport> out;
  const Rational eps = p.eps.value_or(default_eps(a.size()));
  auto pop = popular_sums(a, eps);
  auto mass = exact_check("popular_sum_mass", size_r(pop.mass), Relation::ge, (Rational(1) - eps) * size_r(pop.total),
                          "(1 - eps)|A|^2", "1");
  mass.details = {{"eps", eps.str()}, {"P_eps_size", pop.members.size()}};
  out.push_back(mass);
  auto rich = rich_coordinates(a, eps);
  out.push_back(exact_check("rich_coordinates_size", size_r(rich.size()), Relation::ge,
                            (Rational(1) - Rational(2) * eps) * size_r(a.size()), "(1 - 2 eps)|A|", "1"));
  for (const Rational& s : {Rational(3, 2), Rational(2), Rational(3)}) {
    auto t = regularise(a, s, eps);
    auto it = exact_check("regularisation_iterations", size_r(t.iterations()), Relation::le,
                          size_r(t.iteration_cap()), "floor(log2|A|)", "1");
    it.details = {{"s", s.str()}};
    auto sz = exact_check("regularisation_size", size_r(t.final_set.size()), Relation::ge,
                          (Rational(1) - Rational(2) * eps * size_r(t.iteration_cap())) * size_r(a.size()),
                          "(1 - 2 eps floor(log2|A|))|A|", "1");
    sz.details = {{"s", s.str()}};
    InequalityReport en;
    if (t.final_energy.exact && t.rich_energy.exact) {
      en = exact_check("regularisation_energy", Rational(*t.rich_energy.exact), Relation::ge,
                       t.c2 * Rational(*t.final_energy.exact), "c2 E_s(B)", "c2 = " + t.c2.str());
    } else {
      en = exact_check("regularisation_energy", Rational(), Relation::ge, Rational(), "c2 E_s(B)", "c2 = " + t.c2.str());
      en.lhs_exact = "";
      en.lhs_decimal = t.rich_energy.str();
      en.rhs_exact = "";
      en.rhs_decimal = decimal(to_float(t.c2) * t.final_energy.approx);
      en.ratio = ratio_string(t.rich_energy.approx, to_float(t.c2) * t.final_energy.approx);
      en.verdict = t.energy_bound_holds() ? Verdict::pass : Verdict::fail;
    }
    en.details = sumprod::to_json(t);
    out.push_back(it);
    out.push_back(sz);
    out.push_back(en);
  }
  return out;
}

inline std::vector<InequalityReport> truism(const RSet& b) {
  auto plain = truism_class_bound(b);
  auto r1 = exact_check("truism_unrestricted", Rational(plain.q), Relation::le, Rational(plain.e3), "E3(B)", "1");
  r1.details = {{"classes", plain.classes}, {"equals_E3", plain.q == plain.e3}};
  const Rational eps = default_eps(b.size());
  auto rb = rich_coordinates(b, eps);
  std::vector<InequalityReport> out{r1};
  if (rb.size() >= 2) {
    auto layer = dominant_difference_layer(rb);
    auto pop = popular_sums(b, eps);
    auto restricted = truism_class_bound(b, TruismRestriction{rb, layer.d, pop.members});
    auto r2 = exact_check("truism_restricted", Rational(restricted.q), Relation::le, Rational(restricted.e3), "E3(B)", "1");
    r2.details = {{"classes", restricted.classes}, {"D_size", layer.d.size()}, {"P_eps_size", pop.members.size()}};
    out.push_back(r2);
  }
  return out;
}

inline std::vector<InequalityReport> difference_layer(const RSet& a) {
  auto layer = dominant_difference_layer(a);
  auto r = exact_check("difference_layer_energy", Rational(layer.energy), Relation::le,
                       Rational(layer.weight() * 4 * static_cast<unsigned long>(layer.layers)), "4 L Delta^2 |D|", "4");
  r.details = {{"D_size", layer.d.size()}, {"Delta", layer.delta}, {"layers", layer.layers}};
  return {r};
}

inline LineFamily standard_lines(const RSet& a) {
  std::vector<Line> ls;
  for (const auto& d : diffset(a, a)) ls.push_back(Line{Rational(1), d, false});
  for (const auto& c : diffset(a, dilate(a, Rational(2)))) ls.push_back(Line{Rational(2), c, false});
  return LineFamily::lines(ls);
}

inline DiffBoundInput diff_input(const RSet& a, const Rational& s) {
  auto cover = standard_product_cover(a);
  return {a, a, diffset(a, a), s, cover.p1, cover.p2, cover.t};
}

inline std::vector<InequalityReport> pipeline(const RSet& a, const CheckParams& p) {
  auto res = bunching_pipeline(a, p.c, p.base);
  auto status = exact_check("pipeline_status", size_r(res.status == "ok"), Relation::ge, size_r(0), "status", "none");
  status.verdict = Verdict::report_only;
  status.ratio = "";
  status.details = res.summary;
  status.details["status"] = res.status;
  std::vector<InequalityReport> out{status};
  out.insert(out.end(), res.reports.begin(), res.reports.end());
  return out;
}

inline InequalityReport balog(const RSet& a) {
  auto b = balog_construction(a);
  auto r = b.baseline;
  r.details = {{"slopes", b.slopes},
               {"all_in_square", b.all_in_square},
               {"slopes_between", b.slopes_between},
               {"total_sums", b.total_sums}};
  if (b.globally_distinct) r.details["globally_distinct"] = *b.globally_distinct;
  if (!b.all_in_square || !b.slopes_between || !b.globally_distinct.value_or(true)) r.verdict = Verdict::fail;
  return r;
}

}  // namespace detail

class CheckRegistry {
 public:
  static const CheckRegistry& standard() {
    static const CheckRegistry reg = build();
    return reg;
  }

  const std::vector<CheckDef>& checks() const { return checks_; }

  const CheckDef& find(const std::string& id) const {
    for (const auto& c : checks_)
      if (c.id == id) return c;
    fail(errc::parse_error, "unknown check '" + id + "'");
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& c : checks_) out.push_back(c.id);
    return out;
  }

  /// Comma-separated ids, or "all".
  std::vector<const CheckDef*> select(const std::string& filter) const {
    std::vector<const CheckDef*> out;
    if (filter.empty() || filter == "all") {
      for (const auto& c : checks_) out.push_back(&c);
      return out;
    }
    std::stringstream ss(filter);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) out.push_back(&find(id));
    return out;
  }

 private:
  std::vector<CheckDef> checks_;

  static CheckRegistry build() {
    using detail::one;
    CheckRegistry r;
    auto add = [&](CheckDef d) { r.checks_.push_back(std::move(d)); };
    add({"solymosi", "E^x(A) <= 4|A+A|^2 ceil(log2|A|)", true, 2, 4096, true, false,
         [](const RSet& a, const CheckParams&) { return one(solymosi_check(a)); }});
    add({"cs_product", "E^x(A) >= |A|^4/|AA|", true, 1, 4096, false, false,
         [](const RSet& a, const CheckParams&) { return one(cauchy_schwarz_product_check(a)); }});
    add({"cs_ratio", "E^x(A) >= |A|^4/|A/A|", true, 1, 4096, false, false,
         [](const RSet& a, const CheckParams&) { return one(cauchy_schwarz_ratio_check(a)); }});
    add({"sum_product_chain", "|A+A|^2|AA| >= |A|^4/(4 ceil(log2|A|))", true, 2, 4096, true, false,
         [](const RSet& a, const CheckParams&) { return one(sum_product_chain_check(a)); }});
    add({"energy_moments", "E2(A)^2 <= E3(A)|A|^2", true, 1, 4096, false, false,
         [](const RSet& a, const CheckParams&) { return one(moment_check(a, a)); }});
    add({"dyadic_dominance", "dominant dyadic layer of A/A carries E^x/(4 log)", true, 2, 4096, true, false,
         [](const RSet& a, const CheckParams&) { return one(dyadic_dominance_check(a)); }});
    add({"identities", "realisation sums, layer reconstruction, difference solutions", true, 1, 1024, false, false,
         [](const RSet& a, const CheckParams&) { return detail::identities(a); }});
    add({"fpms_energy", "E^x(A) against |P1|^3|P2|^3 log / T^4 with P1 = A+A, P2 = A", false, 2, 512, false, false,
         [](const RSet& a, const CheckParams& p) { return one(fpms_bound_report(a, sumset(a, a), a, a.size(), p.base)); }});
    add({"incidence_bound", "incidences of A x A with lines of slope 1 and 2", false, 1, 256, false, false,
         [](const RSet& a, const CheckParams&) { return one(incidence_bound_report(a, a, detail::standard_lines(a))); }});
    add({"rich_lines", "lines with at least 3 points of A x A", false, 3, 128, false, false,
         [](const RSet& a, const CheckParams&) { return one(rich_lines_report(a, a, 3)); }});
    add({"difference_solutions_bound", "solutions of a - b = c, P1 = A, P2 = A/A, T = |A|", false, 2, 256, true, false,
         [](const RSet& a, const CheckParams& p) {
           return one(difference_bound_report(DiffBound::solutions, detail::diff_input(a, Rational(3)), p.base));
         }});
    add({"cubic_energy_bound", "E3(A) with P1 = A, P2 = A/A, T = |A|", false, 2, 256, true, false,
         [](const RSet& a, const CheckParams& p) {
           return one(difference_bound_report(DiffBound::cubic, detail::diff_input(a, Rational(3)), p.base));
         }});
    add({"s_energy_bound", "E_{3/2}(A) with P1 = A, P2 = A/A, T = |A|", false, 2, 256, true, false,
         [](const RSet& a, const CheckParams& p) {
           return one(difference_bound_report(DiffBound::fractional, detail::diff_input(a, Rational(3, 2)), p.base));
         }});
    add({"convex_difference_solutions_bound", "solutions of a - b = c for convex A", false, 3, 256, false, true,
         [](const RSet& a, const CheckParams& p) {
           return one(difference_bound_report(DiffBound::convex_solutions, detail::diff_input(a, Rational(3)), p.base));
         }});
    add({"convex_energy_bound", "E2(A) <~ |A|^(5/2) for convex A", false, 3, 1024, false, true,
         [](const RSet& a, const CheckParams& p) {
           return one(difference_bound_report(DiffBound::convex_energy, detail::diff_input(a, Rational(2)), p.base));
         }});
    add({"katz_koester", "r_{AA/AA}(l) >= |A A_l| for every slope", true, 1, katz_koester_gate, true, false,
         [](const RSet& a, const CheckParams&) { return one(katz_koester_check(a)); }});
    add({"q_count_agreement", "q by intersection equals q by solving for a3", true, 2, 12, true, false,
         [](const RSet& a, const CheckParams& p) { return detail::q_agreement(a, p.seed); }});
    add({"bunching_pipeline", "dyadic layer, bunches, collisions and the vertical slice", false, 8, 64, true, false,
         [](const RSet& a, const CheckParams& p) { return detail::pipeline(a, p); }});
    add({"regularisation", "popular sums, rich coordinates and the regularisation loop", true, 4, 128, false, false,
         [](const RSet& a, const CheckParams& p) { return detail::regularisation(a, p); }});
    add({"difference_layer", "E2(X) <= 4 L Delta^2 |D|", true, 2, 4096, false, false,
         [](const RSet& a, const CheckParams&) { return detail::difference_layer(a); }});
    add({"truism", "sum of squared class sizes <= E3(B)", true, 2, truism_gate, false, false,
         [](const RSet& a, const CheckParams&) { return detail::truism(a); }});
    add({"sumset_product_bound", "|A+A|^19|P1|^22|P2|^22 against |A|^41 T^33", false, 4, 128, true, false,
         [](const RSet& a, const CheckParams& p) {
           auto c = standard_product_cover(a);
           return one(regularised_sumset_report(a, c.p1, c.p2, c.t, SumsetBranch::general, p.base));
         }});
    add({"convex_sumset_bound", "|A+A| against |A|^(30/19) for convex A", false, 4, 128, false, true,
         [](const RSet& a, const CheckParams& p) {
           return one(regularised_sumset_report(a, a, a, a.size(), SumsetBranch::convex, p.base));
         }});
    add({"balog_construction", "|AA+AA|^2 >= (|A/A| - 1)|A|^2 by fixed-vector sums", true, 1, 64, true, false,
         [](const RSet& a, const CheckParams&) { return one(detail::balog(a)); }});
    add({"aa_plus_aa_slope_bound", "|AA+AA|^2 against |A/A|^(2/3)|A|^(5/2)", false, 1, 64, true, false,
         [](const RSet& a, const CheckParams& p) { return one(aa_plus_aa_slope_report(a, p.c)); }});
    add({"aa_plus_aa_energy_bound", "|AA+AA|^5 against |A|^13|A/A|^-5 log^(-9/2)", false, 2, aa_energy_gate, true, false,
         [](const RSet& a, const CheckParams& p) { return one(aa_plus_aa_energy_report(a, p.base)); }});
    return r;
  }
};

// ---------------------------------------------------------------------------
// Cache: one JSON file per key under SUMPRODLAB_CACHE_DIR.

class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::filesystem::path default_dir() {
    if (const char* d = std::getenv("SUMPRODLAB_CACHE_DIR"); d && *d) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "sumprodlab";
    if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "sumprodlab";
    return ".sumprodlab-cache";
  }

  static std::string key(const std::string& check, const std::string& content_hash, const nlohmann::json& params) {
    return sha256_hex("v" + std::to_string(schema_version) + "\n" + check + "\n" + content_hash + "\n" + params.dump());
  }

  std::optional<nlohmann::json> get(const std::string& k) const {
    std::ifstream in(path(k));
    if (!in) return std::nullopt;
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;  // torn or foreign file: recompute
    }
  }

  /// Write to a unique temporary and rename, so readers never see partial files.
  void put(const std::string& k, const nlohmann::json& v) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    auto tmp = path(k);
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp);
      if (!out) return;
      out << v.dump();
    }
    std::filesystem::rename(tmp, path(k), ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  std::size_t purge() const {
    std::size_t n = 0;
    std::error_code ec;
    if (!std::filesystem::exists(dir_, ec)) return 0;
    for (const auto& e : std::filesystem::directory_iterator(dir_, ec))
      if (e.path().extension() == ".json") n += std::filesystem::remove(e.path(), ec);
    return n;
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path path(const std::string& k) const { return dir_ / (k + ".json"); }
};

// ---------------------------------------------------------------------------
// Corpus: {"name", "items": [set spec (+ "label", "expect")], "families": [{generator, params, "n": [..]}]}

struct CorpusItem {
  std::string label;
  SetSpec spec;
  nlohmann::json expect;  // recorded fixture values, optional
};

struct Corpus {
  std::string name;
  std::vector<CorpusItem> items;
};

inline std::string describe(const nlohmann::json& spec) {
  if (spec.contains("elements")) return "explicit";
  std::string out = spec.value("generator", std::string("?"));
  const auto params = spec.value("params", nlohmann::json::object());
  for (const auto& [k, v] : params.items())
    out += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  return out;
}

inline Corpus parse_corpus(const nlohmann::json& j) {
  if (!j.is_object()) fail(errc::parse_error, "corpus must be an object");
  Corpus c;
  c.name = j.value("name", std::string("corpus"));
  auto add = [&](const nlohmann::json& spec) {
    CorpusItem it;
    nlohmann::json clean = spec;
    clean.erase("label");
    clean.erase("expect");
    it.spec = realise(clean);
    it.label = spec.value("label", describe(clean));
    it.expect = spec.value("expect", nlohmann::json::object());
    c.items.push_back(std::move(it));
  };
  for (const auto& s : j.value("items", nlohmann::json::array())) add(s);
  for (const auto& f : j.value("families", nlohmann::json::array())) {
    if (!f.contains("n") || !f["n"].is_array()) fail(errc::parse_error, "family needs an 'n' array");
    for (const auto& n : f["n"]) {
      nlohmann::json spec{{"generator", f.at("generator")}, {"params", f.value("params", nlohmann::json::object())}};
      spec["params"]["n"] = n;
      add(spec);
    }
  }
  return c;
}

inline Corpus load_corpus(const std::string& path) { return parse_corpus(read_json_file(path)); }

/// Recorded fixture values compared exactly against fresh computation.
inline std::vector<InequalityReport> fixture_checks(const RSet& a, const nlohmann::json& expect) {
  std::vector<InequalityReport> out;
  for (const auto& [k, v] : expect.items()) {
    BigInt got;
    if (k == "size") got = static_cast<unsigned long>(a.size());
    else if (k == "sumset_size") got = static_cast<unsigned long>(sumset(a, a).size());
    else if (k == "product_set_size") got = static_cast<unsigned long>(prodset(a, a).size());
    else if (k == "ratio_set_size") got = static_cast<unsigned long>(ratioset(a, a).size());
    else if (k == "difference_set_size") got = static_cast<unsigned long>(diffset(a, a).size());
    else if (k == "additive_energy") got = additive_energy(a);
    else if (k == "mult_energy") got = mult_energy(a);
    else if (k == "aa_plus_aa_size") got = static_cast<unsigned long>(aa_plus_aa(a).aa_plus_aa.size());
    else fail(errc::parse_error, "unknown fixture field '" + k + "'");
    Rational want = rational_from_json(v);
    auto r = exact_check("fixture_" + k, Rational(got), Relation::ge, want, "recorded value", "identity");
    r.verdict = Rational(got) == want ? Verdict::pass : Verdict::fail;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runner

struct RunOptions {
  std::string checks = "all";
  unsigned jobs = 1;
  std::size_t max_n = SIZE_MAX;
  CheckParams params;
  bool use_cache = true;
  std::optional<std::filesystem::path> cache_dir;
};

struct RunResult {
  nlohmann::json bundle;
  std::size_t failures = 0, hits = 0, misses = 0;
  int exit_code() const { return failures ? 1 : 0; }
};

inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunResult run(const Corpus& corpus, const RunOptions& opt) {
  const auto& reg = CheckRegistry::standard();
  const auto selected = reg.select(opt.checks);
  Cache cache(opt.cache_dir.value_or(Cache::default_dir()));
  const nlohmann::json params = opt.params.to_json();

  struct Task {
    std::size_t item;
    const CheckDef* check;  // nullptr: fixture comparison
    nlohmann::json out;     // {"reports": [...]} or {"error": ...}
    double seconds = 0;
    bool hit = false;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < corpus.items.size(); ++i) {
    if (!corpus.items[i].expect.empty()) tasks.push_back({i, nullptr, {}});
    for (const auto* c : selected) tasks.push_back({i, c, {}});
  }

  auto execute = [&](Task& t) {
    const auto& item = corpus.items[t.item];
    const RSet& a = item.spec.set;
    auto t0 = std::chrono::steady_clock::now();
    auto to_reports = [](const std::vector<InequalityReport>& rs) {
      auto arr = nlohmann::json::array();
      for (const auto& r : rs) arr.push_back(to_json(r));
      return nlohmann::json{{"reports", arr}};
    };
    auto error_json = [](const std::string& code, const std::string& msg) {
      return nlohmann::json{{"error", code}, {"message", msg}};
    };
    if (!t.check) {
      try {
        t.out = to_reports(fixture_checks(a, item.expect));
      } catch (const error& e) {
        t.out = error_json(std::string(to_string(e.code())), e.what());
      }
    } else if (auto why = t.check->gate(a); why || a.size() > opt.max_n) {
      t.out = error_json("GateViolation", why.value_or("above --max-n " + std::to_string(opt.max_n)));
    } else {
      const std::string k = Cache::key(t.check->id, item.spec.descriptor["content_hash"].get<std::string>(), params);
      std::optional<nlohmann::json> cached = opt.use_cache ? cache.get(k) : std::nullopt;
      if (cached) {
        t.out = std::move(*cached);
        t.hit = true;
      } else {
        try {
          t.out = to_reports(t.check->run(a, opt.params));
        } catch (const error& e) {
          t.out = error_json(std::string(to_string(e.code())), e.what());
        }
        if (opt.use_cache) cache.put(k, t.out);
      }
    }
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const auto wall0 = std::chrono::steady_clock::now();
  if (opt.jobs <= 1) {
    for (auto& t : tasks) execute(t);
  } else {
    boost::asio::thread_pool pool(opt.jobs);
    for (auto& t : tasks) boost::asio::post(pool, [&execute, &t] { execute(t); });
    pool.join();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  RunResult res;
  auto reports = nlohmann::json::array(), errors = nlohmann::json::array(), timings = nlohmann::json::array();
  std::size_t pass = 0, report_only = 0;
  for (const auto& t : tasks) {
    const auto& item = corpus.items[t.item];
    nlohmann::json set = item.spec.descriptor;
    set["label"] = item.label;
    const std::string id = t.check ? t.check->id : "fixture";
    if (t.out.contains("error")) {
      errors.push_back({{"check", id}, {"set", set}, {"error", t.out["error"]}, {"message", t.out["message"]}});
    } else {
      for (auto r : t.out["reports"]) {
        r["set"] = set;
        r["registry_check"] = id;
        const auto v = r["verdict"].get<std::string>();
        if (v == "fail") ++res.failures;
        else if (v == "pass") ++pass;
        else ++report_only;
        reports.push_back(std::move(r));
      }
    }
    if (t.check) (t.hit ? res.hits : res.misses)++;
    timings.push_back({{"check", id}, {"label", item.label}, {"seconds", t.seconds}, {"cache_hit", t.hit}});
  }
  res.bundle = {{"schema_version", schema_version},
                {"corpus", corpus.name},
                {"params", params},
                {"reports", reports},
                {"errors", errors},
                {"summary", {{"reports", reports.size()},
                             {"pass", pass},
                             {"fail", res.failures},
                             {"report_only", report_only},
                             {"errors", errors.size()}}},
                {"envelope", {{"generated_at", utc_timestamp()},
                              {"wall_seconds", wall},
                              {"jobs", opt.jobs},
                              {"cache", {{"dir", cache.dir().string()}, {"hits", res.hits}, {"misses", res.misses}}},
                              {"timings", timings}}}};
  return res;
}

/// The bundle without its envelope: what must be identical across runs.
inline nlohmann::json deterministic_part(nlohmann::json bundle) {
  bundle.erase("envelope");
  return bundle;
}

// ---------------------------------------------------------------------------
// Sweep

/// "8..256" (every n), "8..256:x2" (doubling), "8..256:+8" (step), or "8,16,32".
inline std::vector<std::int64_t> parse_range(const std::string& text) {
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  auto to_int = [&](const std::string& s) -> std::int64_t {
    try {
      std::size_t pos = 0;
      auto v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad n-range '" + text + "'");
    }
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(to_int(tok));
    return out;
  }
  std::string rest = text.substr(dots + 2), step = "+1";
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    step = rest.substr(colon + 1);
    rest = rest.substr(0, colon);
  }
  const std::int64_t lo = to_int(text.substr(0, dots)), hi = to_int(rest);
  if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) fail(errc::parse_error, "bad step in '" + text + "'");
  const std::int64_t k = to_int(step.substr(1));
  if (k < (step[0] == 'x' ? 2 : 1) || lo < 1) fail(errc::parse_error, "bad step in '" + text + "'");
  for (std::int64_t n = lo; n <= hi; n = step[0] == 'x' ? n * k : n + k) out.push_back(n);
  return out;
}

inline std::string fmt_exponent(double v) {
  std::ostringstream o;
  o.precision(6);
  o << std::fixed << v;
  return o.str();
}

/// CSV rows per n: set sizes, observed exponents and, for a registry check, its first report.
inline std::string sweep(const nlohmann::json& family, const std::vector<std::int64_t>& ns, const std::string& check,
                         const CheckParams& params = {}) {
  const CheckDef* def = nullptr;
  if (check != "exponent" && check != "sumset" && check != "none") def = &CheckRegistry::standard().find(check);
  std::ostringstream out;
  out << "n,sumset,product_set,ratio_set,aa_plus_aa,sumset_exponent,product_exponent,delta_obs,aa_plus_aa_exponent";
  if (def) out << ",check,ratio,verdict";
  out << "\n";
  for (auto n : ns) {
    nlohmann::json spec{{"generator", family.at("generator")}, {"params", family.value("params", nlohmann::json::object())}};
    spec["params"]["n"] = n;
    RSet a = generate(spec);
    const double ln = std::log(static_cast<double>(a.size()));
    const auto s = sumset(a, a).size(), p = prodset(a, a).size(), q = ratioset(a, a).size();
    std::optional<std::size_t> aa;
    if (a.size() <= aa_plus_aa_gate && a.is_positive()) aa = aa_plus_aa(a).aa_plus_aa.size();
    auto ex = [&](std::size_t v) { return a.size() > 1 ? fmt_exponent(std::log(static_cast<double>(v)) / ln) : ""; };
    out << a.size() << "," << s << "," << p << "," << q << "," << (aa ? std::to_string(*aa) : "") << "," << ex(s) << ","
        << ex(p) << ","
        << (a.size() > 1 ? fmt_exponent(std::log(static_cast<double>(std::max(s, p))) / ln - 1) : "") << ","
        << (aa ? ex(*aa) : "");
    if (def) {
      std::string ratio, verdict;
      if (auto why = def->gate(a)) {
        verdict = "GateViolation";
      } else {
        try {
          auto rs = def->run(a, params);
          if (!rs.empty()) {
            ratio = rs.front().ratio;
            verdict = std::string(to_string(rs.front().verdict));
          }
        } catch (const error& e) {
          verdict = std::string(to_string(e.code()));
        }
      }
      out << "," << def->id << "," << ratio << "," << verdict;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sumprod::harness
