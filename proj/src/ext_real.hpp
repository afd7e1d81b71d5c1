#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fdivlib {

/// Extended real value on [-inf, +inf] restricted to "finite or +infinity".
///
/// Divergence values, generator limits and constraint bounds live on this
/// half-extended line: they are bounded below (a convex generator with
/// f(1) = 0 has finite f(0) and finite-or-plus-infinite slope at infinity)
/// but may be +infinity.  Keeping the infinity tag explicit avoids the
/// usual IEEE pitfalls (inf - inf, 0 * inf) in the places where the
/// convention actually matters.
class ExtReal {
 public:
  constexpr ExtReal() : value_(0.0), infinite_(false) {}

  /// Implicit from double; IEEE +inf maps to the infinite tag.
  /// NaN and -inf are rejected: they never represent a divergence value.
  ExtReal(double v) : value_(v), infinite_(false) {
    if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not a value");
    if (std::isinf(v)) {
      if (v < 0) throw std::domain_error("ExtReal: -inf is not a value");
      value_ = 0.0;
      infinite_ = true;
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite payload; only meaningful when is_finite().
  constexpr double finite_value() const {
    assert(!infinite_);
    return value_;
  }

  /// Collapse to IEEE double (+inf for the infinite tag).
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  ExtReal& operator+=(ExtReal o) { return *this = *this + o; }

  /// Scale by a nonnegative finite factor with the convention 0 * inf = 0
  /// (the convention used for the tail term f'(inf) * P{q = 0}).
  friend ExtReal scale(double c, ExtReal a) {
    assert(c >= 0.0 && std::isfinite(c));
    if (c == 0.0) return ExtReal(0.0);
    if (a.infinite_) return infinity();
    return ExtReal(c * a.value_);
  }

  friend constexpr bool operator==(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator!=(ExtReal a, ExtReal b) { return !(a == b); }
  friend constexpr bool operator<(ExtReal a, ExtReal b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend constexpr bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend constexpr bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }

  std::string to_string() const {
    if (infinite_) return "inf";
    return std::to_string(value_);
  }

 private:
  double value_;
  bool infinite_;
};

}  // namespace fdivlib
