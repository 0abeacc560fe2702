#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/rset.hpp"

namespace sumprod {

enum class Op { sum, difference, product, ratio };

constexpr std::string_view to_string(Op op) {
  switch (op) {
    case Op::sum: return "sum";
    case Op::difference: return "difference";
    case Op::product: return "product";
    case Op::ratio: return "ratio";
  }
  return "?";
}

namespace detail {

/// Sorted distinct values of a binary operation with their multiplicities.
/// `values` is left empty when only the counts were requested.
struct Tally {
  std::vector<Rational> values;
  std::vector<std::uint64_t> counts;
};

inline BigInt common_denominator(const RSet& s) {
  BigInt l = 1;
  for (const auto& q : s) {
    if (q.is_small() && q.small_den() == 1) continue;
    BigInt d = q.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

/// Numerators of `s` over denominator `den`, or nothing if any exceeds `limit`
/// in absolute value. `den` must be a multiple of every element's denominator.
inline std::optional<std::vector<std::int64_t>> scaled(const RSet& s, const BigInt& den, std::int64_t limit) {
  std::vector<std::int64_t> out;
  out.reserve(s.size());
  const bool unit = den == 1;
  const bool den_small = den.fits_slong_p();
  const std::int64_t den64 = den_small ? den.get_si() : 0;
  for (const auto& q : s) {
    if (q.is_small() && den_small) {
      i128 v = static_cast<i128>(q.small_num()) * (unit ? 1 : den64 / q.small_den());
      if (v > limit || v < -static_cast<i128>(limit)) return std::nullopt;
      out.push_back(static_cast<std::int64_t>(v));
      continue;
    }
    BigInt v = q.numerator() * (den / q.denominator());
    if (!v.fits_slong_p() || abs(v) > BigInt(static_cast<long>(limit))) return std::nullopt;
    out.push_back(v.get_si());
  }
  return out;
}

inline Rational over(std::int64_t key, const BigInt& den) {
  if (den.fits_slong_p()) return Rational(key, static_cast<std::int64_t>(den.get_si()));
  return Rational(BigInt(static_cast<long>(key)), den);
}

/// Run-length encode a sorted key vector.
template <class Key>
void run_length(const std::vector<Key>& sorted, std::vector<Key>& keys, std::vector<std::uint64_t>& counts) {
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    keys.push_back(sorted[i]);
    counts.push_back(j - i);
    i = j;
  }
}

constexpr std::int64_t dense_limit = std::int64_t{1} << 26;

/// Counts of x∘y for integer operands (sum, difference, product only).
inline void tally_int(std::span<const std::int64_t> a, std::span<const std::int64_t> b, Op op,
                      std::vector<std::int64_t>& keys, std::vector<std::uint64_t>& counts) {
  auto apply = [op](std::int64_t x, std::int64_t y) -> std::int64_t {
    switch (op) {
      case Op::sum: return x + y;
      case Op::difference: return x - y;
      default: return x * y;
    }
  };
  auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  std::int64_t lo, hi;
  if (op == Op::product) {
    std::int64_t c[4] = {*amin * *bmin, *amin * *bmax, *amax * *bmin, *amax * *bmax};
    lo = *std::min_element(c, c + 4);
    hi = *std::max_element(c, c + 4);
  } else {
    lo = apply(*amin, op == Op::sum ? *bmin : *bmax);
    hi = apply(*amax, op == Op::sum ? *bmax : *bmin);
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(a.size()) * b.size();
  const i128 range = static_cast<i128>(hi) - lo + 1;
  if (range <= dense_limit && range <= static_cast<i128>(std::max<std::uint64_t>(pairs * 8, 1 << 16))) {
    std::vector<std::uint32_t> hist(static_cast<std::size_t>(range), 0);
    for (std::int64_t x : a)
      for (std::int64_t y : b) ++hist[static_cast<std::size_t>(apply(x, y) - lo)];
    for (std::size_t i = 0; i < hist.size(); ++i) {
      if (hist[i] == 0) continue;
      keys.push_back(lo + static_cast<std::int64_t>(i));
      counts.push_back(hist[i]);
    }
    return;
  }
  std::vector<std::int64_t> all;
  all.reserve(pairs);
  for (std::int64_t x : a)
    for (std::int64_t y : b) all.push_back(apply(x, y));
  std::sort(all.begin(), all.end());
  run_length(all, keys, counts);
}

/// Counts of x/y over integer numerators (y != 0); keys are reduced fractions.
inline void tally_ratio_int(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                            std::vector<std::pair<std::int64_t, std::int64_t>>& keys, std::vector<std::uint64_t>& counts) {
  using Frac = std::pair<std::int64_t, std::int64_t>;
  std::vector<Frac> all;
  all.reserve(a.size() * b.size());
  for (std::int64_t x : a)
    for (std::int64_t y : b) {
      std::int64_t g = std::gcd(x, y);
      std::int64_t p = x / g, q = y / g;
      if (q < 0) {
        p = -p;
        q = -q;
      }
      all.emplace_back(p, q);
    }
  std::sort(all.begin(), all.end());
  std::vector<Frac> k;
  std::vector<std::uint64_t> c;
  run_length(all, k, c);
  std::vector<std::size_t> order(k.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&k](std::size_t i, std::size_t j) {
    return static_cast<i128>(k[i].first) * k[j].second < static_cast<i128>(k[j].first) * k[i].second;
  });
  keys.reserve(k.size());
  counts.reserve(k.size());
  for (std::size_t i : order) {
    keys.push_back(k[i]);
    counts.push_back(c[i]);
  }
}

inline Rational apply_op(const Rational& x, const Rational& y, Op op) {
  switch (op) {
    case Op::sum: return x + y;
    case Op::difference: return x - y;
    case Op::product: return x * y;
    case Op::ratio: return x / y;
  }
  return {};
}

inline void check_operands(const RSet& b, Op op) {
  if (op == Op::ratio && b.contains_zero()) fail(errc::division_by_zero, "ratio with 0 in the denominator set");
}

/// Multiset of a∘b over A×B. Integer fast paths first (dense histogram or
/// sort), then exact rationals.
inline Tally tally(const RSet& a, const RSet& b, Op op, bool want_values = true) {
  check_operands(b, op);
  Tally out;
  if (a.empty() || b.empty()) return out;

  BigInt den = common_denominator(a);
  {
    BigInt db = common_denominator(b);
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), db.get_mpz_t());
  }
  constexpr std::int64_t add_limit = std::int64_t{1} << 61;
  constexpr std::int64_t mul_limit = std::int64_t{1} << 31;
  const std::int64_t limit = (op == Op::product) ? mul_limit : (op == Op::ratio ? small_max : add_limit);
  auto sa = scaled(a, den, limit);
  auto sb = sa ? scaled(b, den, limit) : std::nullopt;
  if (sa && sb) {
    if (op == Op::ratio) {
      std::vector<std::pair<std::int64_t, std::int64_t>> keys;
      tally_ratio_int(*sa, *sb, keys, out.counts);
      if (want_values) {
        out.values.reserve(keys.size());
        for (auto [p, q] : keys) out.values.emplace_back(p, q);
      }
      return out;
    }
    std::vector<std::int64_t> keys;
    tally_int(*sa, *sb, op, keys, out.counts);
    if (want_values) {
      // Products of two scaled numerators sit over den².
      BigInt vden = op == Op::product ? BigInt(den * den) : den;
      out.values.reserve(keys.size());
      for (std::int64_t k : keys) out.values.push_back(over(k, vden));
    }
    return out;
  }

  std::vector<Rational> all;
  all.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) all.push_back(apply_op(x, y, op));
  std::sort(all.begin(), all.end());
  std::vector<Rational> keys;
  run_length(all, keys, out.counts);
  if (want_values) out.values = std::move(keys);
  return out;
}

}  // namespace detail

/// Exact multiset r_{A∘B}: distinct values in increasing order with the
/// number of ordered pairs (a, b) realising each.
class RealisationMap {
 public:
  RealisationMap() = default;
  RealisationMap(Op op, std::size_t left, std::size_t right, detail::Tally t)
      : op_(op), left_(left), right_(right), values_(std::move(t.values)), counts_(std::move(t.counts)) {}

  Op op() const noexcept { return op_; }
  std::size_t left_size() const noexcept { return left_; }
  std::size_t right_size() const noexcept { return right_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  std::uint64_t count(const Rational& x) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), x);
    if (it == values_.end() || *it != x) return 0;
    return counts_[static_cast<std::size_t>(it - values_.begin())];
  }
  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }
  std::uint64_t max_count() const { return counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end()); }
  RSet support() const { return RSet::from_sorted_unique(values_); }

 private:
  Op op_ = Op::sum;
  std::size_t left_ = 0;
  std::size_t right_ = 0;
  std::vector<Rational> values_;
  std::vector<std::uint64_t> counts_;
};

inline RealisationMap realisations(const RSet& a, const RSet& b, Op op) {
  return RealisationMap(op, a.size(), b.size(), detail::tally(a, b, op));
}

/// Multiplicities only, without materialising the values.
inline std::vector<std::uint64_t> realisation_counts(const RSet& a, const RSet& b, Op op) {
  return detail::tally(a, b, op, false).counts;
}

inline RSet combine(const RSet& a, const RSet& b, Op op) {
  return RSet::from_sorted_unique(detail::tally(a, b, op).values);
}

inline RSet sumset(const RSet& a, const RSet& b) { return combine(a, b, Op::sum); }
inline RSet diffset(const RSet& a, const RSet& b) { return combine(a, b, Op::difference); }
inline RSet prodset(const RSet& a, const RSet& b) { return combine(a, b, Op::product); }
inline RSet ratioset(const RSet& a, const RSet& b) { return combine(a, b, Op::ratio); }

inline RSet dilate(const RSet& a, const Rational& c) {
  if (c.is_zero()) fail(errc::division_by_zero, "dilation by 0");
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  if (c.sign() < 0) std::reverse(out.begin(), out.end());
  return RSet::from_sorted_unique(std::move(out));
}

inline RSet translate(const RSet& a, const Rational& c) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x + c);
  return RSet::from_sorted_unique(std::move(out));
}

inline RSet negate(const RSet& a) { return dilate(a, Rational(-1)); }

/// {1/a : a ∈ A}.
inline RSet reciprocals(const RSet& a) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x.reciprocal());
  return RSet::from_unsorted(std::move(out));
}

/// Strictly increasing consecutive gaps.
inline bool is_convex(const RSet& a) {
  if (a.size() < 3) fail(errc::too_small, "convexity needs at least 3 elements");
  Rational prev = a[1] - a[0];
  for (std::size_t i = 2; i < a.size(); ++i) {
    Rational gap = a[i] - a[i - 1];
    if (!(gap > prev)) return false;
    prev = std::move(gap);
  }
  return true;
}

}  // namespace sumprod
