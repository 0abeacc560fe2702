#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

/// Finite set of distinct rationals kept in strictly increasing order.
class RSet {
 public:
  RSet() = default;

  /// Deduplicates and sorts. Empty input is rejected; use `RSet{}` when an
  /// empty result is legitimate.
  static RSet make(std::vector<Rational> values) {
    if (values.empty()) fail(errc::empty_set, "a set needs at least one element");
    return from_unsorted(std::move(values));
  }

  static RSet from_unsorted(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    RSet s;
    s.elems_ = std::move(values);
    return s;
  }

  /// Caller guarantees strictly increasing input.
  static RSet from_sorted_unique(std::vector<Rational> values) {
    RSet s;
    s.elems_ = std::move(values);
    return s;
  }

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  std::span<const Rational> elements() const noexcept { return elems_; }
  const std::vector<Rational>& vec() const noexcept { return elems_; }
  const Rational& operator[](std::size_t i) const { return elems_[i]; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  const Rational& min() const { return elems_.front(); }
  const Rational& max() const { return elems_.back(); }

  bool contains(const Rational& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }
  bool is_positive() const { return elems_.empty() || elems_.front().sign() > 0; }
  bool contains_zero() const { return contains(Rational()); }

  /// Elements of `this` that are also in `other`.
  RSet intersect(const RSet& other) const {
    std::vector<Rational> out;
    std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(), std::back_inserter(out));
    return from_sorted_unique(std::move(out));
  }
  bool is_subset_of(const RSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  /// One element per line, canonical "p/q" text; the content hash is taken
  /// over exactly this string.
  std::string canonical_text() const {
    std::string out;
    for (const auto& q : elems_) {
      out += q.str();
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const RSet&, const RSet&) = default;

 private:
  std::vector<Rational> elems_;
};

}  // namespace sumprod
