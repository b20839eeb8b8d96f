#pragma once

// Smooth real functions on a closed interval, stored as Chebyshev series.
//
// A GridFunction is an immutable value: a validated interval plus the
// coefficients c_k of f(x) = sum_k c_k T_k(t), t the affine image of x on
// [-1, 1]. Derivatives and antiderivatives act on the coefficients directly,
// so third derivatives of resolved functions stay close to full precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "uniwkb/errors.hpp"

namespace uniwkb {

class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      std::ostringstream os;
      os << "invalid interval [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }

  // Slack is relative to the interval length.
  bool contains(double x, double rel_slack = 0.0) const noexcept {
    const double s = rel_slack * length();
    return x >= lo_ - s && x <= hi_ + s;
  }

  double to_ref(double x) const noexcept { return (2.0 * x - lo_ - hi_) / (hi_ - lo_); }
  double from_ref(double t) const noexcept { return 0.5 * (lo_ + hi_) + 0.5 * (hi_ - lo_) * t; }

  friend bool operator==(const Interval& a, const Interval& b) noexcept {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  double lo_;
  double hi_;
};

inline std::string to_string(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << iv.lo() << ", " << iv.hi() << "]";
  return os.str();
}

// Evenly spaced probe abscissas including both endpoints.
inline std::vector<double> probe_points(const Interval& iv, std::size_t count) {
  std::vector<double> xs(std::max<std::size_t>(count, 2));
  const std::size_t last = xs.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    xs[i] = iv.lo() + iv.length() * static_cast<double>(i) / static_cast<double>(last);
  }
  xs.back() = iv.hi();
  return xs;
}

class GridFunction {
 public:
  GridFunction(Interval interval, std::vector<double> coeffs, std::string warning = {})
      : interval_(interval), coeffs_(std::move(coeffs)), warning_(std::move(warning)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  static GridFunction constant(const Interval& iv, double value) { return {iv, {value}}; }

  // f(x) = x on the interval.
  static GridFunction identity(const Interval& iv) {
    return {iv, {iv.mid(), 0.5 * iv.length()}};
  }

  // Clenshaw recurrence. Points outside the interval get the polynomial
  // continuation of the series.
  double operator()(double x) const noexcept {
    const double t = interval_.to_ref(x);
    const double t2 = 2.0 * t;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
      const double b0 = coeffs_[k] + t2 * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coeffs_[0] + t * b1 - b2;
  }

  const Interval& interval() const noexcept { return interval_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

  // Nonempty when the value was produced with an accuracy caveat.
  const std::string& warning() const noexcept { return warning_; }

  // Max |f| estimated on a probe grid denser than the degree.
  double max_abs() const {
    double m = 0.0;
    for (double x : probe_points(interval_, std::max<std::size_t>(257, 4 * coeffs_.size()))) {
      m = std::max(m, std::abs((*this)(x)));
    }
    return m;
  }

  // g(x) = f(-x) on [-hi, -lo].
  GridFunction reflected() const {
    std::vector<double> c = coeffs_;
    for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return {Interval(-interval_.hi(), -interval_.lo()), std::move(c)};
  }

  GridFunction operator-() const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v = -v;
    return {interval_, std::move(c)};
  }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    check_same(a, b, "+");
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
    return {a.interval_, std::move(c)};
  }

  friend GridFunction operator-(const GridFunction& a, const GridFunction& b) { return a + (-b); }

  // Exact product of the two series, trailing negligible terms removed.
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    check_same(a, b, "*");
    const auto& p = a.coeffs_;
    const auto& q = b.coeffs_;
    std::vector<double> c(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double h = 0.5 * p[i] * q[j];
        c[i + j] += h;
        c[i > j ? i - j : j - i] += h;
      }
    }
    trim(c, 1e-2 * std::numeric_limits<double>::epsilon());
    return {a.interval_, std::move(c)};
  }

  friend GridFunction operator*(double s, const GridFunction& f) {
    std::vector<double> c = f.coeffs_;
    for (double& v : c) v *= s;
    return {f.interval_, std::move(c)};
  }
  friend GridFunction operator*(const GridFunction& f, double s) { return s * f; }

  friend GridFunction operator+(const GridFunction& f, double s) {
    std::vector<double> c = f.coeffs_;
    c[0] += s;
    return {f.interval_, std::move(c)};
  }
  friend GridFunction operator+(double s, const GridFunction& f) { return f + s; }
  friend GridFunction operator-(const GridFunction& f, double s) { return f + (-s); }

  // Drops trailing coefficients below rel * max|c|.
  static void trim(std::vector<double>& c, double rel) {
    double big = 0.0;
    for (double v : c) big = std::max(big, std::abs(v));
    const double cut = rel * big;
    while (c.size() > 1 && std::abs(c.back()) <= cut) c.pop_back();
  }

 private:
  static void check_same(const GridFunction& a, const GridFunction& b, const char* op) {
    if (!(a.interval_ == b.interval_)) {
      throw StructuralError(std::string("interval mismatch in GridFunction ") + op + ": " +
                            to_string(a.interval_) + " vs " + to_string(b.interval_));
    }
  }

  Interval interval_;
  std::vector<double> coeffs_;
  std::string warning_;
};

struct FitOptions {
  // Tail coefficients must fall below tol * max(|c|max, scale_floor).
  double tol = 1e-14;
  // Absolute magnitude below which a function counts as zero. Needed for
  // quantities that vanish identically up to rounding.
  double scale_floor = 0.0;
  std::size_t min_points = 17;
  std::size_t max_points = 4097;
};

namespace detail {

// Chebyshev-Lobatto samples to coefficients (type-I DCT, direct summation
// against an exact cosine table).
inline std::vector<double> lobatto_coeffs(const std::vector<double>& f) {
  const std::size_t n = f.size() - 1;
  std::vector<double> cos_table(2 * n);
  for (std::size_t m = 0; m < 2 * n; ++m) {
    cos_table[m] = std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    double s = 0.5 * (f[0] + ((k % 2 == 0) ? f[n] : -f[n]));
    std::size_t idx = 0;
    for (std::size_t j = 1; j < n; ++j) {
      idx += k;
      if (idx >= 2 * n) idx %= 2 * n;
      s += f[j] * cos_table[idx];
    }
    c[k] = 2.0 * s / static_cast<double>(n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

}  // namespace detail

// Chebyshev interpolant through n + 1 Lobatto points, without a convergence
// test. Used for diagnostics (residual profiles) whose values sit at the noise floor.
template <class F>
GridFunction interpolate(F&& f, const Interval& iv, std::size_t n) {
  if (n < 1) throw DomainError("interpolation needs at least two points");
  std::vector<double> values(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    values[j] = f(iv.from_ref(std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n))));
  }
  return {iv, detail::lobatto_coeffs(values)};
}

// Adaptive Chebyshev interpolation with degree doubling. The tail of the
// coefficient sequence decides convergence; the accepted series is then
// checked on midpoints between the nodes, which the fit never saw.
template <class F>
GridFunction fit(F&& f, const Interval& iv, const FitOptions& opt = {}) {
  std::vector<double> values;
  std::size_t n = 16;
  while (n + 1 < opt.min_points) n *= 2;
  double achieved = std::numeric_limits<double>::infinity();

  auto sample = [&](double t) {
    const double x = iv.from_ref(t);
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "function not finite at x = " << x;
      throw DomainError(os.str());
    }
    return v;
  };

  for (; n + 1 <= opt.max_points; n *= 2) {
    std::vector<double> next(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      if (!values.empty() && j % 2 == 0) {
        next[j] = values[j / 2];
      } else {
        next[j] = sample(std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)));
      }
    }
    values = std::move(next);

    std::vector<double> c = detail::lobatto_coeffs(values);
    double big = 0.0;
    for (double v : c) big = std::max(big, std::abs(v));
    const double scale = std::max(big, opt.scale_floor);
    const double threshold = opt.tol * scale;
    const std::size_t tail_len = std::max<std::size_t>(3, (n + 1) / 8);
    double tail = 0.0;
    for (std::size_t k = n + 1 - tail_len; k <= n; ++k) tail = std::max(tail, std::abs(c[k]));
    achieved = scale > 0.0 ? tail / scale : 0.0;
    if (tail > threshold && scale > 0.0) continue;

    // Drop a trailing block whose total weight bounds its max-norm contribution.
    double dropped = 0.0;
    while (c.size() > 1 && dropped + std::abs(c.back()) <= 0.5 * threshold) {
      dropped += std::abs(c.back());
      c.pop_back();
    }
    GridFunction g(iv, std::move(c));

    const double bound =
        std::max(opt.tol, 64.0 * std::numeric_limits<double>::epsilon()) * std::max(scale, 1e-300);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
      worst = std::max(worst, std::abs(g(iv.from_ref(t)) - sample(t)));
    }
    if (worst <= bound) return g;
    achieved = std::max(achieved, worst / std::max(scale, 1e-300));
  }
  std::ostringstream os;
  os << "unresolved function on " << to_string(iv) << ": relative residual " << achieved
     << " after " << opt.max_points << " points (tol " << opt.tol << ")";
  throw UnresolvedFunction(os.str(), achieved);
}

template <class F>
GridFunction fit(F&& f, const Interval& iv, double tol) {
  FitOptions opt;
  opt.tol = tol;
  return fit(std::forward<F>(f), iv, opt);
}

// k-th derivative by the coefficient recurrence.
inline GridFunction deriv(const GridFunction& f, int k = 1) {
  if (k < 0) throw DomainError("negative derivative order");
  if (k == 0) return f;
  const double scale = 2.0 / f.interval().length();
  std::vector<double> c = f.coeffs();
  const std::size_t degree = c.size() - 1;
  double input_mass = 0.0;
  for (double v : c) input_mass += std::abs(v);

  for (int pass = 0; pass < k; ++pass) {
    const std::size_t n = c.size();
    if (n == 1) {
      c.assign(1, 0.0);
      continue;
    }
    std::vector<double> d(n - 1, 0.0);
    for (std::size_t j = n - 1; j >= 1; --j) {
      const double next2 = (j + 1 < n - 1) ? d[j + 1] : 0.0;
      d[j - 1] = next2 + 2.0 * static_cast<double>(j) * c[j];
    }
    d[0] *= 0.5;
    for (double& v : d) v *= scale;
    c = std::move(d);
  }

  std::string warning;
  if (static_cast<std::size_t>(k) > degree) {
    warning = "derivative of order " + std::to_string(k) + " annihilates a degree-" +
              std::to_string(degree) + " representation";
  } else {
    // Coefficient noise of size eps * sum|c| grows like n^(2k) (2/L)^k.
    double out_mass = 0.0;
    for (double v : c) out_mass += std::abs(v);
    const double growth = std::pow(static_cast<double>(degree) * static_cast<double>(degree) * scale, k);
    const double noise = std::numeric_limits<double>::epsilon() * input_mass * growth;
    if (out_mass > 0.0 && noise > 1e-6 * out_mass) {
      std::ostringstream os;
      os << "derivative of order " << k << " has estimated relative error " << noise / out_mass;
      warning = os.str();
    }
  }
  return {f.interval(), std::move(c), std::move(warning)};
}

// F with F' = f and F(anchor) = 0.
inline GridFunction antideriv(const GridFunction& f, double anchor) {
  const Interval& iv = f.interval();
  if (!iv.contains(anchor, 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "antiderivative anchor " << anchor << " outside " << to_string(iv);
    throw DomainError(os.str());
  }
  const auto& c = f.coeffs();
  const std::size_t n = c.size();
  auto at = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
  std::vector<double> C(n + 1, 0.0);
  C[1] = at(0) - 0.5 * at(2);
  for (std::size_t k = 2; k <= n; ++k) C[k] = (at(k - 1) - at(k + 1)) / (2.0 * static_cast<double>(k));
  const double half = 0.5 * iv.length();
  for (double& v : C) v *= half;
  GridFunction F(iv, C);
  C[0] = -F(anchor);
  GridFunction::trim(C, 1e-2 * std::numeric_limits<double>::epsilon());
  return {iv, std::move(C)};
}

// Integral of f over its whole interval.
inline double definite_integral(const GridFunction& f) {
  double s = 0.0;
  const auto& c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); k += 2) {
    s += c[k] * 2.0 / (1.0 - static_cast<double>(k * k));
  }
  return 0.5 * f.interval().length() * s;
}

// Bracketed root by TOMS 748 (bisection-safeguarded inverse interpolation).
template <class F>
double bracketed_root(F&& f, double a, double b) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "no bracketed root on [" << a << ", " << b << "]: f(a) = " << fa << ", f(b) = " << fb;
    throw NoBracketedRoot(os.str());
  }
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                             boost::math::tools::eps_tolerance<double>(52), iters);
  const double lo = r.first;
  const double hi = r.second;
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

inline double root(const GridFunction& f, const Interval& bracket) {
  if (!f.interval().contains(bracket.lo(), 1e-12) || !f.interval().contains(bracket.hi(), 1e-12)) {
    throw DomainError("root bracket " + to_string(bracket) + " outside " + to_string(f.interval()));
  }
  return bracketed_root([&](double x) { return f(x); }, bracket.lo(), bracket.hi());
}

// Gauss-Legendre nodes and weights mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre_unit(std::size_t m) {
  QuadratureRule q{std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
             static_cast<double>(j);
      }
      dp = static_cast<double>(m) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    q.nodes[i] = 0.5 * (1.0 - z);
    q.nodes[m - 1 - i] = 0.5 * (1.0 + z);
    q.weights[i] = 0.5 * w;
    q.weights[m - 1 - i] = 0.5 * w;
  }
  return q;
}

// f(x) / (x - r) for a root r of f, as the mean of f' over [r, x]. The
// quadrature is exact for the polynomial f', so no cancellation occurs near r.
inline GridFunction deflate(const GridFunction& f, double r, const FitOptions& opt = {}) {
  const GridFunction df = deriv(f);
  const QuadratureRule q = gauss_legendre_unit(df.degree() / 2 + 2);
  FitOptions o = opt;
  o.scale_floor = std::max(o.scale_floor, 1e-300);
  return fit(
      [&](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * df(r + q.nodes[i] * (x - r));
        return s;
      },
      f.interval(), o);
}

// Restriction to a subinterval, refitted there.
inline GridFunction restrict_to(const GridFunction& f, const Interval& sub, const FitOptions& opt = {}) {
  if (!f.interval().contains(sub.lo(), 1e-12) || !f.interval().contains(sub.hi(), 1e-12)) {
    throw DomainError("restriction " + to_string(sub) + " not inside " + to_string(f.interval()));
  }
  FitOptions o = opt;
  o.scale_floor = std::max(o.scale_floor, 1e-16 * f.max_abs());
  return fit([&](double x) { return f(x); }, sub, o);
}

// max |f - g| on a probe grid of the shared interval.
inline double max_abs_diff(const GridFunction& f, const GridFunction& g, std::size_t probes = 1000) {
  double m = 0.0;
  for (double x : probe_points(f.interval(), probes)) m = std::max(m, std::abs(f(x) - g(x)));
  return m;
}

}  // namespace uniwkb
