#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sumprod/incidence.hpp"

using namespace sumprod;
using oracle::interval;
using oracle::ints;

namespace {

void expect_code(errc code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::vector<Point> grid(const RSet& a, const RSet& b) {
  std::vector<Point> out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x, y});
  return out;
}

bool collinear(const Point& p, const Point& q, const Point& r) {
  return (q.x - p.x) * (r.y - p.y) == (q.y - p.y) * (r.x - p.x);
}

// Triple loop over every ordered triple of distinct points.
std::uint64_t naive_triples(const RSet& a, const RSet& b) {
  auto pts = grid(a, b);
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        if (!collinear(pts[i], pts[j], pts[k])) continue;
        if (Line::through(pts[i], pts[j]).is_affine()) ++n;
      }
  return n;
}

std::uint64_t naive_incidences(const RSet& a, const RSet& b, const LineFamily& f) {
  std::uint64_t n = 0;
  for (const auto& p : grid(a, b)) {
    if (f.kind() == LineFamily::Kind::affine_line) {
      for (const auto& l : f.members()) n += l.contains(p);
    } else {
      for (const auto& s : f.shifts())
        for (const auto& c : f.base()) n += (c.x + s.x == p.x && c.y + s.y == p.y);
    }
  }
  return n;
}

std::map<Line, std::uint64_t> naive_rich(const RSet& a, const RSet& b, std::uint64_t k, bool axis) {
  auto pts = grid(a, b);
  std::set<Line> ls;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) ls.insert(Line::through(pts[i], pts[j]));
  std::map<Line, std::uint64_t> out;
  for (const auto& l : ls) {
    if (!axis && !l.is_affine()) continue;
    std::uint64_t c = 0;
    for (const auto& p : pts) c += l.contains(p);
    if (c >= k) out[l] = c;
  }
  return out;
}

Line line(Rational m, Rational c) { return {m, c, false}; }

}  // namespace

TEST(Incidences, Examples) {
  auto fam = LineFamily::lines({line(1, 0)});
  EXPECT_EQ(incidences(ints({0, 1}), ints({0, 1}), fam).total, 2u);
  auto two = LineFamily::lines({line(1, 0), line(-1, 4)});
  auto c = incidences(interval(3), interval(3), two);
  EXPECT_EQ(c.total, 6u);
  EXPECT_EQ(c.per_line, (std::vector<std::uint64_t>{3, 3}));
  EXPECT_EQ(incidences(interval(3), interval(3), LineFamily::lines({line(1, Rational(1, 2))})).total, 0u);
}

TEST(Incidences, FamilyValidation) {
  expect_code(errc::bad_params, [] { LineFamily::lines({line(0, 1)}); });
  expect_code(errc::duplicate_elements, [] { LineFamily::lines({line(1, 1), line(1, 1)}); });
  expect_code(errc::empty_set, [] { incidences(interval(2), interval(2), LineFamily::lines({})); });
  auto axis = LineFamily::lines({line(0, 2), Line{Rational(), 1, true}}, true);
  EXPECT_EQ(incidences(interval(3), interval(3), axis).total, 6u);
}

TEST(Incidences, JsonRoundTrip) {
  auto fam = LineFamily::lines({line(Rational(1, 2), Rational(-3, 4)), line(2, 0)});
  auto back = line_family_from_json(to_json(fam));
  EXPECT_EQ(back.members(), fam.members());
  auto curve = LineFamily::curve_translates({{1, 1}, {2, 4}, {3, 9}}, {{0, 0}, {1, -1}});
  auto back2 = line_family_from_json(to_json(curve));
  EXPECT_EQ(back2.shifts(), curve.shifts());
  EXPECT_EQ(back2.base(), curve.base());
  expect_code(errc::parse_error, [] { line_family_from_json(nlohmann::json::parse(R"({"lines": 3})")); });
}

TEST(Incidences, FastPathMatchesNaiveProperty) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 30; ++it) {
    auto a = oracle::random_set(rng, 1 + rng() % 24, 40, 1 + it % 3, false);
    auto b = oracle::random_set(rng, 1 + rng() % 24, 40, 1 + it % 3, false);
    std::vector<Line> ls;
    std::set<Line> seen;
    for (int i = 0; i < 20; ++i) {
      Point p{a[rng() % a.size()], b[rng() % b.size()]};
      Point q{a[rng() % a.size()], b[rng() % b.size()] + Rational(static_cast<std::int64_t>(rng() % 3))};
      auto l = Line::through(p, q);
      if (l.is_affine() && seen.insert(l).second) ls.push_back(l);
    }
    if (ls.empty()) continue;
    auto fam = LineFamily::lines(ls);
    EXPECT_EQ(incidences(a, b, fam).total, naive_incidences(a, b, fam));
  }
}

TEST(Incidences, CurveTranslates) {
  // Parabola over [6], translated along a few vectors.
  std::vector<Point> base;
  for (int i = 1; i <= 6; ++i) base.push_back({i, i * i});
  std::vector<Point> shifts{{0, 0}, {1, 0}, {0, -5}, {-2, 3}};
  auto fam = LineFamily::curve_translates(base, shifts);
  RSet a = interval(8), b = interval(40);
  EXPECT_EQ(incidences(a, b, fam).total, naive_incidences(a, b, fam));
  EXPECT_EQ(incidences(a, b, fam).per_line[0], 6u);
}

TEST(CollinearTriples, Examples) {
  EXPECT_EQ(collinear_triples(ints({0, 1}), ints({0, 1})), 0);
  EXPECT_EQ(collinear_triples(interval(3), interval(3)), 12);
  EXPECT_EQ(collinear_triples(ints({0, 1, 3}), ints({0, 2, 7})), naive_triples(ints({0, 1, 3}), ints({0, 2, 7})));
}

TEST(CollinearTriples, MatchesBruteForceProperty) {
  std::mt19937_64 rng(33);
  for (int it = 0; it < 12; ++it) {
    auto a = oracle::random_set(rng, 3 + rng() % 10, 30, 1 + it % 2, false);
    auto b = oracle::random_set(rng, 3 + rng() % 10, 30, 1 + it % 2, false);
    EXPECT_EQ(collinear_triples(a, b), naive_triples(a, b));
  }
  EXPECT_EQ(collinear_triples(interval(12), interval(12)), naive_triples(interval(12), interval(12)));
}

TEST(CollinearTriples, LineSumIdentity) {
  auto a = interval(9), b = ints({1, 2, 4, 8, 16, 32, 64});
  auto rl = rich_lines(a, b, 2);
  BigInt sum = 0;
  for (auto c : rl.counts) sum += BigInt(c) * (c - 1) * (c - 2);
  EXPECT_EQ(sum, collinear_triples(a, b));
}

TEST(RichLines, Examples) {
  auto r = rich_lines(interval(3), interval(3), 3);
  ASSERT_EQ(r.lines.size(), 2u);
  EXPECT_EQ(r.lines[0], line(-1, 4));
  EXPECT_EQ(r.lines[1], line(1, 0));
  EXPECT_EQ(rich_lines(interval(3), interval(3), 3, true).lines.size(), 8u);
  EXPECT_TRUE(rich_lines(interval(3), interval(5), 4).lines.empty());
  expect_code(errc::bad_k, [] { rich_lines(interval(3), interval(3), 1); });
}

TEST(RichLines, MatchesPairEnumerationOracle) {
  for (bool axis : {false, true}) {
    for (std::uint64_t k : {2u, 3u, 5u}) {
      auto want = naive_rich(interval(8), interval(8), k, axis);
      auto got = rich_lines(interval(8), interval(8), k, axis);
      ASSERT_EQ(got.lines.size(), want.size());
      for (std::size_t i = 0; i < got.lines.size(); ++i) EXPECT_EQ(want.at(got.lines[i]), got.counts[i]);
    }
  }
  auto a = ints({1, 3, 4, 9}), b = RSet::make({Rational(1, 2), Rational(3, 2), 2, 5});
  EXPECT_EQ(rich_lines(a, b, 2).lines.size(), naive_rich(a, b, 2, false).size());
}

TEST(RichLines, IntervalRatioTrend) {
  for (std::int64_t n : {16, 32}) {
    for (std::uint64_t k : {2u, 4u, 8u}) {
      auto r = rich_lines(interval(n), interval(n), k);
      EXPECT_LT(r.ratio, BigFloat(1000)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(DifferenceSolutions, Examples) {
  EXPECT_EQ(count_difference_solutions(ints({0}), ints({0}), ints({0})), 1u);
  EXPECT_EQ(count_difference_solutions(interval(3), interval(3), ints({0})), 3u);
  EXPECT_EQ(count_difference_solutions(interval(4), interval(4), ints({1, 2})), 5u);
}

TEST(DifferenceSolutions, FullDifferenceSetProperty) {
  std::mt19937_64 rng(44);
  for (int it = 0; it < 30; ++it) {
    auto a = oracle::random_set(rng, 1 + rng() % 30, 100, 4, false);
    auto b = oracle::random_set(rng, 1 + rng() % 30, 100, 4, false);
    EXPECT_EQ(count_difference_solutions(a, b, diffset(a, b)), a.size() * b.size());
  }
}

TEST(DifferenceBounds, CubicBranchHypothesis) {
  DiffBoundInput in{interval(8), interval(8), {}, Rational(3), prodset(interval(8), interval(8)),
                    prodset(interval(8), interval(8)), 8};
  // 1 = p·q has a single representation in the product set, far below T = 8.
  try {
    difference_bound_report(DiffBound::cubic, in);
    ADD_FAILURE();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::hypothesis_failed);
    EXPECT_NE(std::string(e.what()).find("1 (r=1)"), std::string::npos) << e.what();
  }
  in.p1 = interval(8);
  in.p2 = ratioset(interval(8), interval(8));
  auto r = difference_bound_report(DiffBound::cubic, in);
  EXPECT_EQ(r.verdict, Verdict::report_only);
  EXPECT_EQ(r.lhs_exact, cubic_energy(interval(8)).get_str());
  // 8^2 · 8^2 · 43^2 · 3 / 8^3
  EXPECT_EQ(r.rhs_decimal, "44376");
}

TEST(DifferenceBounds, SolutionsBranch) {
  DiffBoundInput in{interval(4), interval(4), ints({1, 2}), Rational(3), interval(4), ratioset(interval(4), interval(4)), 4};
  auto r = difference_bound_report(DiffBound::solutions, in);
  EXPECT_EQ(r.lhs_exact, "5");
  EXPECT_EQ(r.details["C_size"], 2);

  DiffBoundInput bad{ints({1}), ints({0}), interval(100), Rational(3), interval(50), ints({1}), 1};
  expect_code(errc::side_condition_failed, [&] { difference_bound_report(DiffBound::solutions, bad); });
}

TEST(DifferenceBounds, FractionalBranch) {
  DiffBoundInput in{interval(8), interval(8), {}, Rational(3, 2), interval(8), ratioset(interval(8), interval(8)), 8};
  auto r = difference_bound_report(DiffBound::fractional, in);
  EXPECT_EQ(r.details["s"], "3/2");
  in.s = Rational(3);
  expect_code(errc::invalid_exponent, [&] { difference_bound_report(DiffBound::fractional, in); });
}

TEST(DifferenceBounds, ConvexBranches) {
  auto sq = ints({1, 4, 9, 16, 25, 36, 49, 64});
  DiffBoundInput in{sq, interval(8), {}, Rational(2), {}, {}, 1};
  auto r = difference_bound_report(DiffBound::convex_energy, in);
  EXPECT_EQ(r.lhs_exact, energy_s(sq, interval(8), Rational(2)).str());
  EXPECT_EQ(r.rhs_decimal, "181.019335984");
  in.s = Rational(3);
  EXPECT_NO_THROW(difference_bound_report(DiffBound::convex_energy, in));
  in.c = diffset(sq, interval(8));
  auto sol = difference_bound_report(DiffBound::convex_solutions, in);
  EXPECT_EQ(sol.lhs_exact, "64");
  in.a = ints({1, 2, 3, 5});
  expect_code(errc::hypothesis_failed, [&] { difference_bound_report(DiffBound::convex_energy, in); });
}

TEST(IncidenceBound, ReportsBothVariants) {
  auto fam = LineFamily::lines({line(1, 0), line(-1, 4), line(2, 0), line(3, 100)});
  auto r = incidence_bound_report(interval(3), interval(3), fam);
  EXPECT_EQ(r.lhs_exact, "7");  // 3 + 3 + 1 + 0
  EXPECT_EQ(r.details["singly_incident"], 1);
  EXPECT_EQ(rich_lines_report(interval(8), interval(8), 4).verdict, Verdict::report_only);
}
