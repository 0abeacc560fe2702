#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "sumprod/error.hpp"

namespace sumprod {

using BigInt = mpz_class;

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t small_max = std::numeric_limits<std::int64_t>::max();

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

inline bool fits_small(i128 v) { return v >= -static_cast<i128>(small_max) && v <= small_max; }

inline BigInt to_bigint(i128 v) {
  u128 mag = abs128(v);
  BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64));
  BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(mag));
  BigInt out = (hi << 64) + lo;
  return v < 0 ? BigInt(-out) : out;
}

inline std::size_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return static_cast<std::size_t>(x);
}

}  // namespace detail

/// Exact rational in canonical form (reduced, positive denominator).
///
/// Values whose numerator and denominator fit in a signed 64-bit word are kept
/// inline; anything larger is promoted to a shared, immutable GMP rational.
/// The representation is a function of the value alone, so equality and
/// hashing can work on it directly.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t v) {  // NOLINT(google-explicit-constructor)
    if (v == std::numeric_limits<std::int64_t>::min())
      assign_big(mpq_class(BigInt(static_cast<long>(v))));
    else
      num_ = v;
  }
  Rational(int v) : Rational(static_cast<std::int64_t>(v)) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(errc::division_by_zero, "zero denominator");
    assign_reduced(num, den);
  }
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) fail(errc::division_by_zero, "zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    assign_big(std::move(q));
  }
  explicit Rational(const BigInt& v) : Rational(v, BigInt(1)) {}

  /// Accepts "p" or "p/q" with an optional sign; surrounding blanks ignored.
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    auto slash = text.find('/');
    std::string_view ns = trim(text.substr(0, slash));
    std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
    auto valid = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!valid(ns, true) || !valid(ds, false)) fail(errc::parse_error, "not a rational: '" + std::string(text) + "'");
    std::string nstr(ns.front() == '+' ? ns.substr(1) : ns);
    BigInt n(nstr, 10);
    BigInt d(std::string(ds), 10);
    return Rational(n, d);
  }

  std::string str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  bool is_small() const noexcept { return !big_; }
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  BigInt numerator() const { return big_ ? BigInt(big_->get_num()) : BigInt(static_cast<long>(num_)); }
  BigInt denominator() const { return big_ ? BigInt(big_->get_den()) : BigInt(static_cast<long>(den_)); }
  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(BigInt(static_cast<long>(num_)), BigInt(static_cast<long>(den_)));
  }

  int sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }
  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_integer() const noexcept { return big_ ? big_->get_den() == 1 : den_ == 1; }

  double to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  BigInt floor() const {
    BigInt n = numerator(), d = denominator(), q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
  }
  BigInt ceil() const {
    BigInt n = numerator(), d = denominator(), q;
    mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
  }

  Rational operator-() const {
    if (big_) return from_mpq(-*big_);
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational reciprocal() const {
    if (is_zero()) fail(errc::division_by_zero, "reciprocal of zero");
    if (big_) return from_mpq(1 / *big_);
    return num_ > 0 ? make_canonical(den_, num_) : make_canonical(-den_, -num_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      using detail::i128;
      if (a.den_ == b.den_) return from_i128(static_cast<i128>(a.num_) + b.num_, a.den_);
      return from_i128(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                       static_cast<i128>(a.den_) * b.den_);
    }
    return from_mpq(a.to_mpq() + b.to_mpq());
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      using detail::i128;
      if (a.den_ == b.den_) return from_i128(static_cast<i128>(a.num_) - b.num_, a.den_);
      return from_i128(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                       static_cast<i128>(a.den_) * b.den_);
    }
    return from_mpq(a.to_mpq() - b.to_mpq());
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      using detail::i128;
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      // Cross-cancel first so the product is already reduced.
      std::int64_t g1 = std::gcd(a.num_, b.den_);
      std::int64_t g2 = std::gcd(b.num_, a.den_);
      i128 n = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
      i128 d = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
      if (detail::fits_small(n) && detail::fits_small(d)) return make_canonical(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
      return from_mpq(mpq_class(detail::to_bigint(n), detail::to_bigint(d)));
    }
    return from_mpq(a.to_mpq() * b.to_mpq());
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_small() != b.is_small()) return false;
    if (a.is_small()) return a.num_ == b.num_ && a.den_ == b.den_;
    return *a.big_ == *b.big_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      if (a.den_ == b.den_) return a.num_ <=> b.num_;
      using detail::i128;
      i128 l = static_cast<i128>(a.num_) * b.den_;
      i128 r = static_cast<i128>(b.num_) * a.den_;
      return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const noexcept {
    if (!big_)
      return detail::mix64(static_cast<std::uint64_t>(num_) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(den_));
    std::size_t h = 0x51ed27u;
    auto fold = [&h](mpz_srcptr z) {
      h = detail::mix64(h ^ static_cast<std::uint64_t>(mpz_sgn(z) + 2));
      for (std::size_t i = 0, n = mpz_size(z); i < n; ++i)
        h = detail::mix64(h ^ static_cast<std::uint64_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
    };
    fold(big_->get_num_mpz_t());
    fold(big_->get_den_mpz_t());
    return h;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static Rational make_canonical(std::int64_t n, std::int64_t d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  static Rational from_mpq(mpq_class q) {
    Rational r;
    r.assign_big(std::move(q));
    return r;
  }
  static Rational from_i128(detail::i128 n, detail::i128 d) {
    using namespace detail;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    u128 g = gcd128(abs128(n), static_cast<u128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    if (n == 0) return Rational();
    if (fits_small(n) && fits_small(d)) return make_canonical(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    return from_mpq(mpq_class(to_bigint(n), to_bigint(d)));
  }
  void assign_reduced(std::int64_t n, std::int64_t d) { *this = from_i128(n, d); }
  // `q` must be canonical.
  void assign_big(mpq_class q) {
    const auto& n = q.get_num();
    const auto& d = q.get_den();
    if (n.fits_slong_p() && d.fits_slong_p() && n != BigInt(static_cast<long>(std::numeric_limits<std::int64_t>::min()))) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_shared<const mpq_class>(std::move(q));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

struct RationalHash {
  std::size_t operator()(const Rational& q) const noexcept { return q.hash(); }
};

/// Smallest k with 2^k >= n (0 for n <= 1).
inline unsigned ceil_log2(std::uint64_t n) {
  unsigned k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < n) ++k;
  return k;
}

/// Largest k with 2^k <= n; n must be positive.
inline unsigned floor_log2(std::uint64_t n) {
  unsigned k = 0;
  while (n > 1) {
    n >>= 1;
    ++k;
  }
  return k;
}

}  // namespace sumprod

template <>
struct std::hash<sumprod::Rational> {
  std::size_t operator()(const sumprod::Rational& q) const noexcept { return q.hash(); }
};
