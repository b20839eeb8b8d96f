#pragma once

// eps-series with function coefficients and mechanical extraction of the
// order-n equations.

#include <cstddef>
#include <string>
#include <vector>

#include "uniwkb/equations.hpp"
#include "uniwkb/funcspace.hpp"
#include "uniwkb/series.hpp"

namespace uniwkb {

template <>
struct ring_traits<GridFunction> {
  using scalar = double;
  static GridFunction zero_like(const GridFunction& a) { return GridFunction::constant(a.interval(), 0.0); }
  static GridFunction one_like(const GridFunction& a) { return GridFunction::constant(a.interval(), 1.0); }
  static GridFunction scale(const GridFunction& a, double s) { return s * a; }
  static double from_int(long v) { return static_cast<double>(v); }
};

using EpsSeries = TruncatedSeries<GridFunction>;

inline EpsSeries make_eps_series(std::vector<GridFunction> ys) {
  if (ys.empty()) throw StructuralError("eps-series needs at least the leading coefficient");
  for (const auto& y : ys) {
    if (!(y.interval() == ys.front().interval())) {
      throw StructuralError("eps-series coefficients on different intervals: " + to_string(y.interval()) +
                            " vs " + to_string(ys.front().interval()));
    }
  }
  return EpsSeries(std::move(ys));
}

// Cauchy product truncated at order N.
inline EpsSeries mul(const EpsSeries& a, const EpsSeries& b, std::size_t N) {
  if (N > a.order() || N > b.order()) {
    throw StructuralError("requested order " + std::to_string(N) + " exceeds available orders");
  }
  return a.truncated(N) * b.truncated(N);
}

inline EpsSeries int_power(const EpsSeries& a, unsigned k, std::size_t N) {
  if (N > a.order()) throw StructuralError("requested order " + std::to_string(N) + " exceeds available order");
  return int_power(a.truncated(N), k);
}

// Sum of the coefficients at a numerical eps.
inline GridFunction sum_at(const EpsSeries& ys, double eps) {
  GridFunction s = ys[ys.order()];
  for (std::size_t n = ys.order(); n-- > 0;) s = ys[n] + eps * s;
  return s;
}

// Function and its first three derivatives, ready for pointwise jets.
struct JetFunctions {
  explicit JetFunctions(const GridFunction& f) : d0(f), d1(deriv(f, 1)), d2(deriv(f, 2)), d3(deriv(f, 3)) {}
  GridFunction d0, d1, d2, d3;
  Jet<double> at(double x) const { return {d0(x), d1(x), d2(x), d3(x)}; }
};

// Pointwise evaluator of order-n equation coefficients for an eps-series.
class OrderEvaluator {
 public:
  OrderEvaluator(Kind kind, const EpsSeries& ys, const GridFunction& omega2, double a2 = 0.0,
                 QuadSign sign = QuadSign::corrected)
      : kind_(kind), w_(omega2), wd_(deriv(omega2)), a2_(a2), sign_(sign) {
    for (const auto& y : ys.coeffs()) jets_.emplace_back(y);
  }

  std::size_t order() const noexcept { return jets_.size() - 1; }

  PointData point(double x) const { return {w_(x), wd_(x), a2_}; }

  // Jet expansion truncated at order n; slots beyond the stored orders are zero.
  Jet<TruncatedSeries<double>> jet(double x, std::size_t n) const {
    std::vector<double> v0(n + 1, 0.0), v1(n + 1, 0.0), v2(n + 1, 0.0), v3(n + 1, 0.0);
    for (std::size_t k = 0; k <= n && k < jets_.size(); ++k) {
      const Jet<double> j = jets_[k].at(x);
      v0[k] = j.y;
      v1[k] = j.d1;
      v2[k] = j.d2;
      v3[k] = j.d3;
    }
    return {TruncatedSeries<double>(v0), TruncatedSeries<double>(v1), TruncatedSeries<double>(v2),
            TruncatedSeries<double>(v3)};
  }

  // Order-n residual coefficient at x.
  double residual(double x, std::size_t n) const { return order_coefficient(kind_, jet(x, n), point(x), n, sign_); }

  // Forcing F_n = -(order-n residual with y_n = 0); needs orders 0..n-1.
  double forcing(double x, std::size_t n) const {
    auto j = jet(x, n);
    j.y[n] = 0.0;
    j.d1[n] = 0.0;
    j.d2[n] = 0.0;
    j.d3[n] = 0.0;
    return -order_coefficient(kind_, j, point(x), n, sign_);
  }

  // Linearization coefficients (f, g) about y0 at x.
  std::pair<double, double> linear_part(double x) const { return linearization(kind_, jets_[0].at(x), point(x)); }

  const JetFunctions& coefficient(std::size_t n) const { return jets_.at(n); }

 private:
  Kind kind_;
  GridFunction w_, wd_;
  double a2_;
  QuadSign sign_;
  std::vector<JetFunctions> jets_;
};

// Order-n residual of the kind's defining equation as a function.
inline GridFunction order_extract(Kind kind, const EpsSeries& ys, const GridFunction& omega2, std::size_t n,
                                  double a2 = 0.0, const FitOptions& opt = {}) {
  if (n > ys.order()) throw StructuralError("order " + std::to_string(n) + " not present in the series");
  if (!(ys[0].interval() == omega2.interval())) {
    throw StructuralError("series and omega^2 live on different intervals");
  }
  const OrderEvaluator ev(kind, ys, omega2, a2);
  FitOptions o = opt;
  o.scale_floor = std::max(o.scale_floor, 1.0);
  return fit([&](double x) { return ev.residual(x, n); }, omega2.interval(), o);
}

}  // namespace uniwkb
