#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sumprod/energy.hpp"

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

}  // namespace

TEST(EnergyS, IntegerExamples) {
  auto a = ints({0, 1, 2});
  EXPECT_EQ(*energy_s(a, a, Rational(2)).exact, 19);
  EXPECT_EQ(*energy_s(a, a, Rational(3)).exact, 45);
  EXPECT_EQ(*energy_s(ints({0}), ints({0}), Rational(2)).exact, 1);
  expect_code(errc::invalid_exponent, [&] { energy_s(a, a, Rational(1, 2)); });
}

TEST(EnergyS, FractionalExponent) {
  auto a = ints({0, 1, 2});
  auto e = energy_s(a, a, Rational(3, 2));
  EXPECT_FALSE(e.is_exact());
  EXPECT_EQ(e.term_tolerance, fractional_term_tolerance);
  // counts 3,2,2,1,1: 3^{3/2} + 2·2^{3/2} + 2
  BigFloat want = BigFloat(3) * boost::multiprecision::sqrt(BigFloat(3)) + 4 * boost::multiprecision::sqrt(BigFloat(2)) + 2;
  EXPECT_LT(boost::multiprecision::abs(e.approx - want), BigFloat("1e-40"));
}

TEST(MultEnergy, ExamplesAndQuadrupleOracle) {
  EXPECT_EQ(mult_energy(ints({1, 2, 4})), 19);
  EXPECT_EQ(mult_energy(ints({1})), 1);
  EXPECT_EQ(mult_energy(ints({1, 2, 3})), 15);
  EXPECT_EQ(mult_energy_quadruples(ints({1, 2, 3})), 15);
  expect_code(errc::zero_element, [] { mult_energy(ints({0, 1})); });
  expect_code(errc::scale_too_large, [] { mult_energy_quadruples(interval(33)); });
}

TEST(MultEnergy, TwoAlgorithmsAgreeProperty) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 25; ++it) {
    auto a = oracle::random_set(rng, 2 + rng() % 20, 60, 3, true);
    auto r2 = mult_energy(a);
    EXPECT_EQ(r2, mult_energy_quadruples(a));
    EXPECT_EQ(r2, oracle::quadruples(a));
  }
}

TEST(PopularDifferences, Examples) {
  auto a = interval(4);
  auto d3 = popular_differences(a, a, 3);
  EXPECT_EQ(d3.vec(), (std::vector<Rational>{-1, 0, 1}));
  EXPECT_EQ(popular_differences(a, a, 1), diffset(a, a));
  EXPECT_EQ(popular_differences(ints({0}), ints({0}), 1).vec(), (std::vector<Rational>{0}));
  expect_code(errc::bad_threshold, [&] { popular_differences(a, a, 0); });
  expect_code(errc::bad_threshold, [&] { popular_differences(a, a, 5); });
}

TEST(PopularDifferences, NestedAndTailIdentityProperty) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 20; ++it) {
    auto a = oracle::random_set(rng, 2 + rng() % 25, 40, 2, false);
    auto b = oracle::random_set(rng, 2 + rng() % 25, 40, 2, false);
    std::size_t kmax = std::min(a.size(), b.size());
    std::uint64_t tail = 0;
    RSet prev = popular_differences(a, b, 1);
    tail += prev.size();
    for (std::size_t k = 2; k <= kmax; ++k) {
      RSet cur = popular_differences(a, b, k);
      EXPECT_TRUE(cur.is_subset_of(prev));
      tail += cur.size();
      prev = cur;
    }
    // r(x) never exceeds min(|A|,|B|), so Σ_k |D_k| counts every pair once.
    EXPECT_EQ(tail, a.size() * b.size());
  }
}

TEST(PopularSums, Examples) {
  auto p = popular_sums(ints({1, 2, 3}), Rational(1, 2));
  EXPECT_EQ(p.threshold, Rational(9, 10));
  EXPECT_EQ(p.members, sumset(ints({1, 2, 3}), ints({1, 2, 3})));
  auto q = popular_sums(interval(8), Rational(1, 2));
  EXPECT_EQ(q.threshold, Rational(32, 15));
  std::vector<Rational> want;
  for (int x = 4; x <= 14; ++x) want.emplace_back(x);
  EXPECT_EQ(q.members.vec(), want);
  EXPECT_TRUE(q.mass_bound_holds());
  auto tiny = popular_sums(interval(8), Rational(1, 100));
  EXPECT_EQ(tiny.members.size(), 15u);
  expect_code(errc::bad_eps, [] { popular_sums(interval(3), Rational(1)); });
  expect_code(errc::bad_eps, [] { popular_sums(interval(3), Rational(0)); });
}

TEST(DyadicDecompose, Examples) {
  auto ones = realisations(ints({1, 2, 4}), ints({1}), Op::ratio);
  auto d1 = dyadic_decompose(ones);
  ASSERT_EQ(d1.layers.size(), 1u);
  EXPECT_EQ(d1.layers[0].j, 1u);

  detail::Tally t;
  t.values = {1, 2, 3, 4};
  t.counts = {1, 1, 2, 4};
  RealisationMap m(Op::sum, 2, 4, t);
  auto d = dyadic_decompose(m);
  ASSERT_EQ(d.layers.size(), 3u);
  EXPECT_EQ(d.layers[0].j, 1u);
  EXPECT_EQ(d.layers[0].members, (std::vector<Rational>{1, 2}));
  EXPECT_EQ(d.layers[1].members, (std::vector<Rational>{3}));
  EXPECT_EQ(d.layers[2].members, (std::vector<Rational>{4}));
  // weights 2·4, 1·16, 1·64
  EXPECT_EQ(d.dominant, 2u);
  EXPECT_EQ(layer_reconstruction(d), 1 + 1 + 4 + 16);
}

TEST(DyadicDecompose, IntervalSixteenRatioMap) {
  auto a = interval(16);
  auto map = realisations(a, a, Op::ratio);
  auto d = dyadic_decompose(map);
  // Frozen from the brute-force oracle: layer sizes 116, 32, 8, 2, 1 for
  // j = 1..5; the j = 5 layer (λ = 1, 16 points) carries weight 1024.
  ASSERT_EQ(d.layers.size(), 5u);
  EXPECT_EQ(d.layers[0].size(), 116u);
  EXPECT_EQ(d.layers[1].size(), 32u);
  EXPECT_EQ(d.dominant_layer().j, 5u);
  EXPECT_EQ(d.dominant_layer().members, (std::vector<Rational>{1}));
  EXPECT_EQ(layer_reconstruction(d), 832);
  EXPECT_EQ(mult_energy(a), 832);
  auto check = dyadic_dominance_check(a);
  EXPECT_EQ(check.verdict, Verdict::pass);
}

TEST(DyadicDecompose, TieGoesToSmallestIndex) {
  detail::Tally t;
  t.values = {1, 2, 3, 4, 5};
  t.counts = {1, 1, 1, 1, 2};  // weights 4·4 = 16 and 1·16 = 16
  auto d = dyadic_decompose(RealisationMap(Op::sum, 1, 6, t));
  EXPECT_EQ(d.dominant_layer().j, 1u);
}

TEST(FpmsBound, Examples) {
  auto r = fpms_bound_report(ints({1, 2}), ints({0, 1, 2, 3}), ints({0, 1, 2, 3}), 2);
  EXPECT_EQ(r.verdict, Verdict::report_only);
  EXPECT_EQ(r.lhs_exact, "6");
  EXPECT_EQ(r.rhs_decimal, "512");
  EXPECT_EQ(r.ratio, "0.01171875");

  auto s = fpms_bound_report(interval(4), interval(8), interval(8), 4);
  EXPECT_EQ(s.lhs_exact, "32");
  EXPECT_EQ(s.rhs_decimal, "3072");
  EXPECT_EQ(s.ratio, "0.0104166666667");

  auto t1 = fpms_bound_report(interval(3), interval(8), interval(8), 1);
  EXPECT_EQ(t1.verdict, Verdict::report_only);

  try {
    fpms_bound_report(interval(4), interval(8), interval(8), 5);
    ADD_FAILURE();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::hypothesis_failed);
    EXPECT_NE(std::string(e.what()).find("4 (r=4)"), std::string::npos) << e.what();
  }
}

TEST(ExplicitChecks, PassOnStructuredSets) {
  std::vector<RSet> sets = {interval(16), ints({1, 2, 4, 8, 16, 32}), ints({1, 4, 9, 16, 25, 36, 49})};
  for (const auto& a : sets) {
    EXPECT_EQ(solymosi_check(a).verdict, Verdict::pass);
    EXPECT_EQ(cauchy_schwarz_product_check(a).verdict, Verdict::pass);
    EXPECT_EQ(cauchy_schwarz_ratio_check(a).verdict, Verdict::pass);
    EXPECT_EQ(sum_product_chain_check(a).verdict, Verdict::pass);
    EXPECT_EQ(moment_check(a, a).verdict, Verdict::pass);
    EXPECT_EQ(dyadic_dominance_check(a).verdict, Verdict::pass);
  }
  expect_code(errc::non_positive, [] { solymosi_check(ints({-1, 2})); });
}
