#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "sumprod/rational.hpp"

namespace sumprod {

/// 50 significant decimal digits; used wherever a non-integer power or a
/// logarithm enters (fractional energies, bound formulas, ratios).
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigFloat to_float(const BigInt& v) {
  if (v.fits_slong_p()) return BigFloat(v.get_si());
  return BigFloat(v.get_str());
}

inline BigFloat to_float(const Rational& q) {
  if (q.is_small()) return BigFloat(q.small_num()) / BigFloat(q.small_den());
  return to_float(q.numerator()) / to_float(q.denominator());
}

inline BigFloat to_float(std::uint64_t v) { return BigFloat(v); }

/// x^e for x > 0 and rational e.
inline BigFloat rpow(const BigFloat& x, const Rational& e) {
  if (e.is_integer() && e.is_small()) return boost::multiprecision::pow(x, static_cast<int>(e.small_num()));
  return boost::multiprecision::exp(to_float(e) * boost::multiprecision::log(x));
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

/// Exact conversion of an integer-valued float.
inline BigInt to_bigint(const BigFloat& integral) {
  std::string s = integral.str(0, std::ios_base::fixed);
  if (auto dot = s.find('.'); dot != std::string::npos) s.resize(dot);
  return BigInt(s, 10);
}

/// Largest rational with denominator 10^digits not exceeding x.
inline Rational rational_floor(const BigFloat& x, int digits = 18) {
  BigFloat scale = boost::multiprecision::pow(BigFloat(10), digits);
  BigInt num = to_bigint(boost::multiprecision::floor(x * scale));
  BigInt den = ipow(BigInt(10), static_cast<unsigned long>(digits));
  return Rational(num, den);
}

/// `digits` significant digits, scientific only when the magnitude calls for it.
inline std::string decimal(const BigFloat& x, int digits = 12) {
  if (boost::multiprecision::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (boost::multiprecision::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

inline std::string decimal(const Rational& q, int digits = 12) { return decimal(to_float(q), digits); }

enum class LogBase { two, e };

constexpr std::string_view to_string(LogBase b) { return b == LogBase::two ? "2" : "e"; }

/// The logarithmic factor of bound formulas: ⌈log₂ n⌉ or ln n, floored at 1
/// so that report-only ratios stay finite for tiny sets.
inline BigFloat log_factor(std::uint64_t n, LogBase base = LogBase::two) {
  BigFloat v = base == LogBase::two ? BigFloat(ceil_log2(n)) : boost::multiprecision::log(BigFloat(n));
  return v < 1 ? BigFloat(1) : v;
}

}  // namespace sumprod
