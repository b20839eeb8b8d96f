#pragma once

// Truncated power series sum_{n<=N} a_n t^n over a coefficient ring R.
//
// The same template serves three roles: eps-series with function coefficients,
// pointwise jets (R = double) used to extract order-n equations, and exact
// turning-point expansions (R = polynomial in the gamma symbols).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "uniwkb/errors.hpp"

namespace uniwkb {

// Ring operations the series needs beyond +, -, *.
//   zero_like(a)       additive identity compatible with a
//   one_like(a)        multiplicative identity compatible with a
//   scale(a, s)        a times a scalar of type scalar
//   pow_leading(a, r)  a^r for the leading coefficient (rational powers)
//   inverse(a)         multiplicative inverse of a leading coefficient
template <class R>
struct ring_traits;

template <>
struct ring_traits<double> {
  using scalar = double;
  static double zero_like(double) { return 0.0; }
  static double one_like(double) { return 1.0; }
  static double scale(double a, double s) { return a * s; }
  static double pow_leading(double a, double r) {
    if (!(a > 0.0) && std::floor(r) != r) throw DomainError("fractional power of a nonpositive leading term");
    return std::pow(a, r);
  }
  static double inverse(double a) {
    if (a == 0.0) throw DomainError("inverse of a vanishing leading term");
    return 1.0 / a;
  }
  static double from_int(long v) { return static_cast<double>(v); }
};

template <class R>
class TruncatedSeries {
 public:
  using traits = ring_traits<R>;
  using scalar = typename traits::scalar;

  explicit TruncatedSeries(std::vector<R> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw StructuralError("truncated series needs at least one coefficient");
  }

  // a + 0 t + ... + 0 t^order
  static TruncatedSeries constant(const R& a, std::size_t order) {
    std::vector<R> c(order + 1, traits::zero_like(a));
    c[0] = a;
    return TruncatedSeries(std::move(c));
  }

  std::size_t order() const noexcept { return c_.size() - 1; }
  const R& operator[](std::size_t n) const { return c_.at(n); }
  R& operator[](std::size_t n) { return c_.at(n); }
  const std::vector<R>& coeffs() const noexcept { return c_; }

  TruncatedSeries truncated(std::size_t order) const {
    if (order > this->order()) throw StructuralError("cannot raise the truncation order");
    return TruncatedSeries(std::vector<R>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(order + 1)));
  }

  // Multiplication by t^k, keeping the truncation order.
  TruncatedSeries shifted(std::size_t k) const {
    std::vector<R> c(c_.size(), traits::zero_like(c_[0]));
    for (std::size_t n = k; n < c_.size(); ++n) c[n] = c_[n - k];
    return TruncatedSeries(std::move(c));
  }

  TruncatedSeries operator-() const {
    std::vector<R> c = c_;
    for (auto& v : c) v = traits::scale(v, traits::from_int(-1));
    return TruncatedSeries(std::move(c));
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<R> c;
    c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) c.push_back(a.c_[k] + b.c_[k]);
    return TruncatedSeries(std::move(c));
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

  // Cauchy product truncated at the smaller order.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<R> c;
    c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      R s = a.c_[0] * b.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s = s + a.c_[j] * b.c_[k - j];
      c.push_back(std::move(s));
    }
    return TruncatedSeries(std::move(c));
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const scalar& s) {
    std::vector<R> c = a.c_;
    for (auto& v : c) v = traits::scale(v, s);
    return TruncatedSeries(std::move(c));
  }
  friend TruncatedSeries operator*(const scalar& s, const TruncatedSeries& a) { return a * s; }

  // Coefficient-ring scalar acting on every term.
  TruncatedSeries times(const R& r) const {
    std::vector<R> c = c_;
    for (auto& v : c) v = v * r;
    return TruncatedSeries(std::move(c));
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const scalar& s) {
    TruncatedSeries r = a;
    r.c_[0] = r.c_[0] + traits::scale(traits::one_like(r.c_[0]), s);
    return r;
  }
  friend TruncatedSeries operator+(const scalar& s, const TruncatedSeries& a) { return a + s; }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const scalar& s) { return a + scalar(-s); }

 private:
  std::vector<R> c_;
};

// a^k for a positive integer k, by repeated multiplication.
template <class R>
TruncatedSeries<R> int_power(const TruncatedSeries<R>& a, unsigned k) {
  if (k == 0) throw DomainError("int_power needs a positive exponent");
  TruncatedSeries<R> r = a;
  for (unsigned i = 1; i < k; ++i) r = r * a;
  return r;
}

// a^r for a series with invertible leading coefficient, via the recurrence
// b_n = 1/(n a_0) sum_{k=1..n} ((r+1)k - n) a_k b_{n-k}.
template <class R>
TruncatedSeries<R> rpow(const TruncatedSeries<R>& a, const typename ring_traits<R>::scalar& r) {
  using T = ring_traits<R>;
  const std::size_t N = a.order();
  const R inv0 = T::inverse(a[0]);
  std::vector<R> b(N + 1, T::zero_like(a[0]));
  b[0] = T::pow_leading(a[0], r);
  for (std::size_t n = 1; n <= N; ++n) {
    R s = T::zero_like(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
      const typename T::scalar w = (r + T::from_int(1)) * T::from_int(static_cast<long>(k)) - T::from_int(static_cast<long>(n));
      s = s + T::scale(a[k] * b[n - k], w);
    }
    b[n] = T::scale(s * inv0, T::from_int(1) / T::from_int(static_cast<long>(n)));
  }
  return TruncatedSeries<R>(std::move(b));
}

}  // namespace uniwkb
