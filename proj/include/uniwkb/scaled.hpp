#pragma once

// Real numbers carried as mantissa * e^log_scale, so exponentially growing
// solution branches never overflow silently.

#include <cmath>
#include <string>

#include "uniwkb/errors.hpp"

namespace uniwkb {

struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  static ScaledValue from_double(double v) { return normalized(v, 0.0); }

  // Exponential e^t times m, without forming e^t.
  static ScaledValue exp_times(double m, double t) { return normalized(m, t); }

  static ScaledValue normalized(double m, double s) {
    if (m == 0.0 || !std::isfinite(m)) return {m, m == 0.0 ? 0.0 : s};
    const double l = std::log(std::abs(m));
    return {std::copysign(1.0, m), s + l};
  }

  bool is_zero() const { return mantissa == 0.0; }

  // log |value|; -inf for zero.
  double log_abs() const {
    if (mantissa == 0.0) return -INFINITY;
    return log_scale + std::log(std::abs(mantissa));
  }

  // The value as a double; throws instead of returning an infinity.
  double to_double() const {
    if (mantissa == 0.0) return 0.0;
    if (log_abs() > 709.0) {
      throw OverflowError("value e^" + std::to_string(log_abs()) + " not representable as a double");
    }
    return mantissa * std::exp(log_scale);
  }

  // Value relative to e^ref (stays finite when |value| ~ e^ref).
  double relative_to(double ref) const {
    if (mantissa == 0.0) return 0.0;
    return mantissa * std::exp(log_scale - ref);
  }

  ScaledValue operator-() const { return {-mantissa, log_scale}; }

  friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    return normalized(a.mantissa * b.mantissa, a.log_scale + b.log_scale);
  }
  friend ScaledValue operator*(const ScaledValue& a, double b) { return normalized(a.mantissa * b, a.log_scale); }
  friend ScaledValue operator*(double b, const ScaledValue& a) { return a * b; }

  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double ref = std::max(a.log_abs(), b.log_abs());
    return normalized(a.relative_to(ref) + b.relative_to(ref), ref);
  }
  friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) { return a + (-b); }
};

// |a - b| / scale, all as scaled values; the result is an ordinary double.
inline double scaled_ratio(const ScaledValue& num, const ScaledValue& den) {
  if (num.is_zero()) return 0.0;
  if (den.is_zero()) return INFINITY;
  return std::exp(num.log_abs() - den.log_abs());
}

}  // namespace uniwkb
