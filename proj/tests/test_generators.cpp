#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "sumprod/generators.hpp"

using namespace sumprod;
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

TEST(Generators, Examples) {
  EXPECT_EQ(gen::interval(5), ints({1, 2, 3, 4, 5}));
  auto g = gen::gp(Rational(1), Rational(2), 4);
  EXPECT_EQ(g, ints({1, 2, 4, 8}));
  EXPECT_EQ(oracle::realisations(g, g, oracle::Kind::product).size(), 7u);
  auto c = gen::convex_power(4, 2);
  EXPECT_EQ(c, ints({1, 4, 9, 16}));
  EXPECT_TRUE(is_convex(c));
  EXPECT_EQ(gen::ap(Rational(1, 2), Rational(1, 3), 3), RSet::make({Rational(1, 2), Rational(5, 6), Rational(7, 6)}));
  EXPECT_EQ(gen::convex_from_gaps({Rational(1), Rational(2), Rational(4)}), ints({1, 2, 4, 8}));
}

TEST(Generators, StructuredSizes) {
  for (std::int64_t n = 4; n <= 64; ++n) {
    auto a = gen::interval(n);
    EXPECT_EQ(oracle::realisations(a, a, oracle::Kind::sum).size(), static_cast<std::size_t>(2 * n - 1));
    auto g = gen::gp(Rational(1), Rational(2), n);
    EXPECT_EQ(oracle::realisations(g, g, oracle::Kind::product).size(), static_cast<std::size_t>(2 * n - 1));
  }
}

TEST(Generators, ConvexFamilies) {
  for (unsigned e : {2u, 3u, 5u})
    for (std::int64_t n : {3, 10, 50}) EXPECT_TRUE(is_convex(gen::convex_power(n, e)));
  auto s = gen::convex_from_gaps({Rational(1, 2), Rational(2, 3), Rational(5)}, Rational(7));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(is_convex(s));
}

TEST(Generators, RandomSubsetDeterministic) {
  auto a = gen::random_subset(1000, 50, 42);
  auto b = gen::random_subset(1000, 50, 42);
  auto c = gen::random_subset(1000, 50, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.size(), 50u);
  EXPECT_TRUE(a.min() >= Rational(1) && a.max() <= Rational(1000));
  EXPECT_EQ(gen::random_subset(10, 10, 7), gen::interval(10));
}

TEST(Generators, SplitMixReferenceValues) {
  // First outputs for seed 1234567 from the reference implementation.
  SplitMix64 r(1234567);
  EXPECT_EQ(r.next(), 6457827717110365317ULL);
  EXPECT_EQ(r.next(), 3203168211198807973ULL);
  EXPECT_EQ(r.next(), 9817491932198370423ULL);
}

TEST(Generators, Errors) {
  expect_code(errc::bad_params, [] { gen::interval(0); });
  expect_code(errc::duplicate_elements, [] { gen::ap(Rational(1), Rational(0), 3); });
  expect_code(errc::bad_params, [] { gen::ap(Rational(1), Rational(-1), 3); });
  expect_code(errc::bad_params, [] { gen::ap(Rational(0), Rational(1), 3); });
  expect_code(errc::duplicate_elements, [] { gen::gp(Rational(1), Rational(1), 3); });
  expect_code(errc::bad_params, [] { gen::gp(Rational(1), Rational(1, 2), 3); });
  expect_code(errc::bad_params, [] { gen::convex_power(5, 1); });
  expect_code(errc::bad_params, [] { gen::convex_from_gaps({Rational(2), Rational(2)}); });
  expect_code(errc::bad_params, [] { gen::convex_from_gaps({}); });
  expect_code(errc::bad_params, [] { gen::random_subset(5, 6, 1); });
}

TEST(Generators, SpecJson) {
  auto s = generate(nlohmann::json::parse(R"({"generator":"gp","params":{"a":"1","r":"2","n":16}})"));
  EXPECT_EQ(s, gen::gp(Rational(1), Rational(2), 16));
  auto e = generate(nlohmann::json::parse(R"({"elements":["1","3/2","5"]})"));
  EXPECT_EQ(e, RSet::make({Rational(1), Rational(3, 2), Rational(5)}));
  expect_code(errc::duplicate_elements, [] { generate(nlohmann::json::parse(R"({"elements":["1","2/2"]})")); });
  expect_code(errc::parse_error, [] { generate(nlohmann::json::parse(R"({"generator":"nope"})")); });
  expect_code(errc::parse_error, [] { generate(nlohmann::json::parse(R"({"generator":"interval","params":{}})")); });
  expect_code(errc::parse_error, [] { generate(nlohmann::json::parse(R"({"elements":["x"]})")); });
}

TEST(Generators, FromFileAndHash) {
  auto dir = std::filesystem::temp_directory_path() / "sumprod_gen_test";
  std::filesystem::create_directories(dir);
  auto p = dir / "set.json";
  std::ofstream(p) << R"(["5", "1", "3/2"])";
  EXPECT_EQ(gen::from_file(p.string()), RSet::make({Rational(1), Rational(3, 2), Rational(5)}));
  std::ofstream(p) << R"({"elements": [1, 2)";
  expect_code(errc::parse_error, [&] { gen::from_file(p.string()); });
  expect_code(errc::parse_error, [&] { gen::from_file((dir / "missing.json").string()); });
  std::filesystem::remove_all(dir);

  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(content_hash(ints({1, 2})), sha256_hex("1\n2\n"));
  auto d = realise(nlohmann::json::parse(R"({"generator":"interval","params":{"n":4}})"));
  EXPECT_EQ(d.descriptor["size"], 4);
  EXPECT_EQ(d.descriptor["content_hash"], content_hash(gen::interval(4)));
}
