#pragma once

#include <limits>

// Extended reals for max-sum fields. "Minus infinity" is a finite sentinel so
// that sums of a handful of forbidden terms never overflow into -inf or NaN;
// every composite result is floored back onto the sentinel.
namespace msteiner::ext {

inline constexpr double kNeg = -std::numeric_limits<double>::max() / 4;
inline constexpr double kNegThreshold = kNeg / 2;

constexpr bool is_neg(double v) noexcept { return v < kNegThreshold; }

constexpr double floor_neg(double v) noexcept { return v < kNegThreshold ? kNeg : v; }

/// Saturating addition. Inputs must already be >= kNeg.
constexpr double add(double a, double b) noexcept { return floor_neg(a + b); }

/// Saturating scale by a non-negative factor.
constexpr double scale(double factor, double v) noexcept {
  if (is_neg(v)) return kNeg;
  double r = factor * v;
  return r >= kNegThreshold ? r : kNeg;
}

}  // namespace msteiner::ext
