#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/energy.hpp"
#include "sumprod/json_io.hpp"

namespace sumprod {

struct Point {
  Rational x;
  Rational y;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// y = slope·x + intercept, or the vertical line x = intercept.
struct Line {
  Rational slope;
  Rational intercept;
  bool vertical = false;

  static Line through(const Point& p, const Point& q) {
    if (p.x == q.x) return {Rational(), p.x, true};
    Rational m = (q.y - p.y) / (q.x - p.x);
    return {m, p.y - m * p.x, false};
  }

  bool is_affine() const { return !vertical && !slope.is_zero(); }
  bool contains(const Point& p) const { return vertical ? p.x == intercept : p.y == slope * p.x + intercept; }
  std::string str() const { return vertical ? "x = " + intercept.str() : "y = " + slope.str() + " x + " + intercept.str(); }

  friend auto operator<=>(const Line&, const Line&) = default;
};

/// Either a set of lines or a set of translates of one curve; the curve is
/// stored as its finite graph over a ground set.
class LineFamily {
 public:
  enum class Kind { affine_line, curve_translate };

  static LineFamily lines(std::vector<Line> ls, bool allow_axis_parallel = false) {
    for (const auto& l : ls)
      if (!allow_axis_parallel && !l.is_affine()) fail(errc::bad_params, "not an affine line: " + l.str());
    check_distinct(ls, "line");
    LineFamily f;
    f.kind_ = Kind::affine_line;
    f.lines_ = std::move(ls);
    return f;
  }

  static LineFamily curve_translates(std::vector<Point> base, std::vector<Point> shifts) {
    std::vector<Rational> xs;
    for (const auto& p : base) xs.push_back(p.x);
    check_distinct(xs, "base abscissa");
    check_distinct(shifts, "shift");
    LineFamily f;
    f.kind_ = Kind::curve_translate;
    f.base_ = std::move(base);
    f.shifts_ = std::move(shifts);
    return f;
  }

  Kind kind() const { return kind_; }
  std::size_t size() const { return kind_ == Kind::affine_line ? lines_.size() : shifts_.size(); }
  const std::vector<Line>& members() const { return lines_; }
  const std::vector<Point>& base() const { return base_; }
  const std::vector<Point>& shifts() const { return shifts_; }

 private:
  template <class T>
  static void check_distinct(std::vector<T> v, const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      fail(errc::duplicate_elements, std::string("repeated ") + what);
  }

  Kind kind_ = Kind::affine_line;
  std::vector<Line> lines_;
  std::vector<Point> base_;
  std::vector<Point> shifts_;
};

inline nlohmann::json to_json(const LineFamily& f) {
  auto pair = [](const Point& p) { return nlohmann::json::array({p.x.str(), p.y.str()}); };
  if (f.kind() == LineFamily::Kind::affine_line) {
    auto out = nlohmann::json::array();
    for (const auto& l : f.members()) out.push_back({{"slope", l.slope.str()}, {"intercept", l.intercept.str()}});
    return out;
  }
  nlohmann::json out{{"base", nlohmann::json::array()}, {"shifts", nlohmann::json::array()}};
  for (const auto& p : f.base()) out["base"].push_back(pair(p));
  for (const auto& p : f.shifts()) out["shifts"].push_back(pair(p));
  return out;
}

inline LineFamily line_family_from_json(const nlohmann::json& j) {
  auto point = [](const nlohmann::json& e) {
    if (!e.is_array() || e.size() != 2) fail(errc::parse_error, "expected a [x, y] pair");
    return Point{rational_from_json(e[0]), rational_from_json(e[1])};
  };
  if (j.is_array()) {
    std::vector<Line> ls;
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("slope") || !e.contains("intercept"))
        fail(errc::parse_error, "line entries need slope and intercept");
      ls.push_back({rational_from_json(e["slope"]), rational_from_json(e["intercept"]), false});
    }
    return LineFamily::lines(std::move(ls));
  }
  if (!j.is_object() || !j.contains("base") || !j.contains("shifts")) fail(errc::parse_error, "unrecognised line family");
  std::vector<Point> base, shifts;
  for (const auto& e : j["base"]) base.push_back(point(e));
  for (const auto& e : j["shifts"]) shifts.push_back(point(e));
  return LineFamily::curve_translates(std::move(base), std::move(shifts));
}

struct IncidenceCount {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_line;

  /// Members meeting the grid in exactly one point.
  std::uint64_t singly_incident() const {
    return static_cast<std::uint64_t>(std::count(per_line.begin(), per_line.end(), 1u));
  }
};

inline IncidenceCount incidences(const RSet& a, const RSet& b, const LineFamily& fam) {
  if (fam.size() == 0) fail(errc::empty_set, "line family is empty");
  IncidenceCount out;
  out.per_line.reserve(fam.size());
  if (fam.kind() == LineFamily::Kind::affine_line) {
    for (const auto& l : fam.members()) {
      std::uint64_t n = 0;
      if (l.vertical) {
        n = a.contains(l.intercept) ? b.size() : 0;
      } else {
        for (const auto& x : a) n += b.contains(l.slope * x + l.intercept);
      }
      out.per_line.push_back(n);
    }
  } else {
    for (const auto& s : fam.shifts()) {
      std::uint64_t n = 0;
      for (const auto& p : fam.base()) n += a.contains(p.x + s.x) && b.contains(p.y + s.y);
      out.per_line.push_back(n);
    }
  }
  out.total = std::accumulate(out.per_line.begin(), out.per_line.end(), std::uint64_t{0});
  return out;
}

namespace detail {

/// Calls f(p, group) for every grid point p and every maximal group of other
/// grid points lying with p on one line. Points are indexed i·|B| + j, which
/// is lexicographic order.
template <class F>
void pencils(const RSet& a, const RSet& b, bool axis_parallel, F&& f) {
  const std::size_t nb = b.size(), n = a.size() * nb;
  std::vector<std::uint32_t> group;
  auto emit_groups = [&](std::size_t p, auto& entries) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size();) {
      std::size_t j = i;
      group.clear();
      while (j < entries.size() && entries[j].first == entries[i].first) group.push_back(entries[j++].second);
      f(p, std::span<const std::uint32_t>(group));
      i = j;
    }
  };

  constexpr std::int64_t limit = std::int64_t{1} << 61;
  auto ax = scaled(a, common_denominator(a), limit);
  auto bx = scaled(b, common_denominator(b), limit);
  if (ax && bx) {
    // Scaling x and y separately maps lines to lines, so slope classes are unchanged.
    using Key = std::pair<std::int64_t, std::int64_t>;
    std::vector<std::pair<Key, std::uint32_t>> entries;
    for (std::size_t p = 0; p < n; ++p) {
      entries.clear();
      std::int64_t px = (*ax)[p / nb], py = (*bx)[p % nb];
      for (std::size_t q = 0; q < n; ++q) {
        if (q == p) continue;
        std::int64_t dx = (*ax)[q / nb] - px, dy = (*bx)[q % nb] - py;
        if (!axis_parallel && (dx == 0 || dy == 0)) continue;
        if (dx < 0 || (dx == 0 && dy < 0)) dx = -dx, dy = -dy;
        std::int64_t g = std::gcd(dx, dy);
        entries.push_back({{dy / g, dx / g}, static_cast<std::uint32_t>(q)});
      }
      emit_groups(p, entries);
    }
    return;
  }
  using Key = std::pair<int, Rational>;  // (1, 0) marks vertical
  std::vector<std::pair<Key, std::uint32_t>> entries;
  for (std::size_t p = 0; p < n; ++p) {
    entries.clear();
    const Rational &px = a[p / nb], &py = b[p % nb];
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      Rational dx = a[q / nb] - px, dy = b[q % nb] - py;
      if (!axis_parallel && (dx.is_zero() || dy.is_zero())) continue;
      Key k = dx.is_zero() ? Key{1, Rational()} : Key{0, dy / dx};
      entries.push_back({k, static_cast<std::uint32_t>(q)});
    }
    emit_groups(p, entries);
  }
}

}  // namespace detail

/// Ordered triples of distinct grid points on one affine line.
inline BigInt collinear_triples(const RSet& a, const RSet& b, bool axis_parallel = false) {
  unsigned __int128 total = 0;
  detail::pencils(a, b, axis_parallel, [&](std::size_t, std::span<const std::uint32_t> g) {
    total += static_cast<unsigned __int128>(g.size()) * (g.size() - 1);
  });
  return detail::to_bigint(static_cast<detail::i128>(total));
}

struct RichLines {
  std::uint64_t k = 2;
  std::vector<Line> lines;
  std::vector<std::uint64_t> counts;
  BigFloat ratio;  // |L_k| k^3 / (|A||B|)^2
};

/// Affine lines through at least k grid points, sorted by (slope, intercept).
inline RichLines rich_lines(const RSet& a, const RSet& b, std::uint64_t k, bool axis_parallel = false) {
  if (k < 2) fail(errc::bad_k, "k must be at least 2");
  const std::size_t nb = b.size();
  auto point = [&](std::size_t i) { return Point{a[i / nb], b[i % nb]}; };
  std::vector<std::pair<Line, std::uint64_t>> found;
  detail::pencils(a, b, axis_parallel, [&](std::size_t p, std::span<const std::uint32_t> g) {
    if (g.size() + 1 < k) return;
    if (*std::min_element(g.begin(), g.end()) < p) return;  // reported from its first point
    found.push_back({Line::through(point(p), point(g[0])), g.size() + 1});
  });
  std::sort(found.begin(), found.end());
  RichLines out;
  out.k = k;
  for (auto& [l, c] : found) {
    out.lines.push_back(l);
    out.counts.push_back(c);
  }
  BigFloat grid = BigFloat(a.size()) * b.size();
  out.ratio = BigFloat(out.lines.size()) * k * k * k / (grid * grid);
  return out;
}

inline std::uint64_t count_difference_solutions(const RSet& a, const RSet& b, const RSet& c) {
  auto m = realisations(a, b, Op::difference);
  std::uint64_t n = 0;
  for (const auto& x : c) n += m.count(x);
  return n;
}

inline InequalityReport incidence_bound_report(const RSet& a, const RSet& b, const LineFamily& fam) {
  auto inc = incidences(a, b, fam);
  BigFloat core = boost::multiprecision::cbrt(BigFloat(a.size()) * b.size() * fam.size());
  core *= core;
  BigFloat coarse = core + fam.size();
  BigFloat refined = core + inc.singly_incident();
  auto r = ratio_report("incidence_bound", std::to_string(inc.total), BigFloat(inc.total), Relation::le, coarse,
                        "(|A||B||L|)^(2/3) + |L|");
  r.details = {{"family_size", fam.size()},
               {"singly_incident", inc.singly_incident()},
               {"rhs_refined", decimal(refined)},
               {"ratio_refined", ratio_string(BigFloat(inc.total), refined)}};
  return r;
}

inline InequalityReport rich_lines_report(const RSet& a, const RSet& b, std::uint64_t k) {
  auto rl = rich_lines(a, b, k);
  BigFloat grid = BigFloat(a.size()) * b.size();
  auto r = ratio_report("rich_lines", std::to_string(rl.lines.size()), BigFloat(rl.lines.size()), Relation::le,
                        grid * grid / (BigFloat(k) * k * k), "(|A||B|)^2 / k^3");
  r.details = {{"k", k}};
  return r;
}

/// Which bound on difference solutions or energies of A − B to evaluate.
enum class DiffBound { solutions, cubic, fractional, convex_solutions, convex_energy };

constexpr std::string_view to_string(DiffBound b) {
  switch (b) {
    case DiffBound::solutions: return "difference_solutions_bound";
    case DiffBound::cubic: return "cubic_energy_bound";
    case DiffBound::fractional: return "s_energy_bound";
    case DiffBound::convex_solutions: return "convex_difference_solutions_bound";
    case DiffBound::convex_energy: return "convex_energy_bound";
  }
  return "?";
}

struct DiffBoundInput {
  RSet a, b;
  RSet c;              // solution branches
  Rational s{3};       // energy branches
  RSet p1, p2;         // product branches: every a is p·q in at least t ways
  std::uint64_t t = 1;
};

namespace detail {

inline void require_product_hypothesis(const RSet& a, const RSet& p1, const RSet& p2, std::uint64_t t) {
  if (t < 1) fail(errc::bad_threshold, "T must be >= 1");
  auto prod = realisations(p1, p2, Op::product);
  std::string witness;
  int shown = 0;
  for (const auto& x : a) {
    auto r = prod.count(x);
    if (r >= t) continue;
    if (shown++ < 5) witness += (witness.empty() ? "" : ", ") + x.str() + " (r=" + std::to_string(r) + ")";
  }
  if (shown > 0)
    fail(errc::hypothesis_failed, "r_{P1P2}(a) < T=" + std::to_string(t) + " for " + std::to_string(shown) +
                                      " element(s), e.g. " + witness);
}

inline void require_side(bool ok, const std::string& what) {
  if (!ok) fail(errc::side_condition_failed, what);
}

}  // namespace detail

/// Exact left side against the bound's core expression (constant 1).
inline InequalityReport difference_bound_report(DiffBound branch, const DiffBoundInput& in, LogBase base = LogBase::two) {
  const BigFloat A = in.a.size(), B = in.b.size(), C = in.c.size();
  const BigFloat P1 = in.p1.size(), P2 = in.p2.size(), T = in.t;
  const BigInt a_n = in.a.size(), b_n = in.b.size(), c_n = in.c.size(), p1_n = in.p1.size(), p2_n = in.p2.size();
  const Rational s = in.s;
  const Rational third(1, 3), two_thirds(2, 3);

  auto need_es = [&](bool allow_three) {
    bool open = s > Rational(1) && s < Rational(3);
    if (!(open || (allow_three && s == Rational(3))))
      fail(errc::invalid_exponent, "s = " + s.str() + " outside the admissible range");
  };
  auto energy_lhs = [&](const std::string& check, const BigFloat& rhs, const std::string& formula) {
    auto e = energy_s(in.a, in.b, s);
    return ratio_report(check, e.str(), e.approx, Relation::le, rhs, formula);
  };

  InequalityReport r;
  const std::string check(to_string(branch));
  switch (branch) {
    case DiffBound::solutions: {
      detail::require_product_hypothesis(in.a, in.p1, in.p2, in.t);
      detail::require_side(p1_n * c_n <= p2_n * p2_n * b_n * b_n, "|P1||C| <= |P2|^2 |B|^2");
      auto n = count_difference_solutions(in.a, in.b, in.c);
      r = ratio_report(check, std::to_string(n), BigFloat(n), Relation::le, rpow(P1 * P2 * B * C, two_thirds) / T,
                       "(|P1||P2||B||C|)^(2/3) / T");
      break;
    }
    case DiffBound::cubic: {
      detail::require_product_hypothesis(in.a, in.p1, in.p2, in.t);
      detail::require_side(p1_n * a_n <= p2_n * p2_n * b_n, "|P1||A| <= |P2|^2 |B|");
      auto e = energy_s(in.a, in.b, Rational(3));
      r = ratio_report(check, e.str(), e.approx, Relation::le,
                       B * B * P1 * P1 * P2 * P2 * log_factor(in.a.size(), base) / (T * T * T),
                       "|B|^2 |P1|^2 |P2|^2 log|A| / T^3");
      break;
    }
    case DiffBound::fractional: {
      need_es(false);
      detail::require_product_hypothesis(in.a, in.p1, in.p2, in.t);
      detail::require_side(p1_n * a_n <= p2_n * p2_n * b_n, "|P1||A| <= |P2|^2 |B|");
      BigFloat rhs = rpow(P1 * P2, s - Rational(1)) * rpow(B, (s + Rational(1)) / Rational(2)) *
                     rpow(A, (Rational(3) - s) / Rational(2)) / rpow(T, Rational(3) * (s - Rational(1)) / Rational(2));
      r = energy_lhs(check, rhs, "(|P1||P2|)^(s-1) |B|^((s+1)/2) |A|^((3-s)/2) / T^(3(s-1)/2)");
      break;
    }
    case DiffBound::convex_solutions: {
      if (!is_convex(in.a)) fail(errc::hypothesis_failed, "A is not convex");
      detail::require_side(c_n <= a_n * b_n * b_n, "|C| <= |A||B|^2");
      auto n = count_difference_solutions(in.a, in.b, in.c);
      r = ratio_report(check, std::to_string(n), BigFloat(n), Relation::le, rpow(A, third) * rpow(B * C, two_thirds),
                       "|A|^(1/3) (|B||C|)^(2/3)");
      break;
    }
    case DiffBound::convex_energy: {
      if (!is_convex(in.a)) fail(errc::hypothesis_failed, "A is not convex");
      need_es(true);
      if (s == Rational(3))
        r = energy_lhs(check, A * B * B * log_factor(in.a.size(), base), "|A||B|^2 log|A|");
      else
        r = energy_lhs(check, A * rpow(B, (s + Rational(1)) / Rational(2)), "|A||B|^((s+1)/2)");
      break;
    }
  }
  r.details = {{"branch", check}, {"A_size", in.a.size()}, {"B_size", in.b.size()}, {"log_base", std::string(to_string(base))}};
  if (branch == DiffBound::solutions || branch == DiffBound::convex_solutions) r.details["C_size"] = in.c.size();
  if (branch != DiffBound::solutions && branch != DiffBound::convex_solutions) r.details["s"] = s.str();
  if (branch != DiffBound::convex_solutions && branch != DiffBound::convex_energy) {
    r.details["P1_size"] = in.p1.size();
    r.details["P2_size"] = in.p2.size();
    r.details["T"] = in.t;
  }
  return r;
}

}  // namespace sumprod
