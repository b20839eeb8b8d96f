#pragma once

// Shared machinery for expansions anchored at a simple zero x_tp of omega^2.
//
// With Delta = x - x_tp and omega^2 = Delta q(x), q > 0 near x_tp, every
// phase-type integral factorizes as
//   int_{x_tp}^x omega w dx = Delta^{3/2} J_{sqrt(q) w}(x),
//   J_v(x) = int_0^1 s^{1/2} v(x_tp + s Delta) ds,
// and J is smooth through the turning point. All turning-point kinds are
// evaluated in this regularized form, so no 0/0 limit is ever taken numerically.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "uniwkb/errors.hpp"
#include "uniwkb/funcspace.hpp"
#include "uniwkb/series.hpp"

namespace uniwkb {

struct SolverOptions {
  // Fit tolerance for every function the solvers build.
  double tol = 1e-14;
  std::size_t max_points = 4097;
  // Radius of the local-series branch near a turning point, as a fraction
  // of the interval length.
  double stitch_fraction = 1e-2;
  // Order of the local Taylor series used inside the stitch radius.
  std::size_t local_order = 16;
  // Each computed order must satisfy its order equation to this relative level.
  double check_tol = 1e-6;

  FitOptions fit(double scale_floor = 0.0) const {
    FitOptions o;
    o.tol = tol;
    o.max_points = max_points;
    o.scale_floor = scale_floor;
    return o;
  }
};

// Sign changes of f located on a probe grid and refined by bracketed roots.
inline std::vector<double> find_zeros(const GridFunction& f) {
  const auto xs = probe_points(f.interval(), std::max<std::size_t>(400, 8 * f.coeffs().size()));
  std::vector<double> roots;
  double prev = f(xs[0]);
  if (prev == 0.0) roots.push_back(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double cur = f(xs[i]);
    if (cur == 0.0) {
      roots.push_back(xs[i]);
    } else if (prev != 0.0 && (prev > 0.0) != (cur > 0.0)) {
      roots.push_back(bracketed_root([&](double x) { return f(x); }, xs[i - 1], xs[i]));
    }
    prev = cur;
  }
  return roots;
}

// Slope of omega^2 at a zero; throws when the zero is not simple.
inline double simple_zero_slope(const GridFunction& w, double x0) {
  const double slope = deriv(w)(x0);
  const double scale = w.max_abs() / w.interval().length();
  if (!(std::abs(slope) > 1e-8 * scale)) {
    std::ostringstream os;
    os.precision(17);
    os << "not a simple turning point at x = " << x0 << " (d omega^2/dx = " << slope << ")";
    throw TurningPointError(os.str());
  }
  return slope;
}

// J_v(x) = int_0^1 s^{1/2} v(x0 + s (x - x0)) ds for a polynomial v, computed
// as int_0^1 2 r^2 v(x0 + r^2 (x - x0)) dr with Gauss-Legendre nodes that make
// the rule exact.
class RegularizedIntegral {
 public:
  RegularizedIntegral(GridFunction v, double x0)
      : v_(std::move(v)), x0_(x0), rule_(gauss_legendre_unit(v_.degree() + 2)) {}

  double operator()(double x) const {
    const double d = x - x0_;
    double s = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      const double r2 = rule_.nodes[i] * rule_.nodes[i];
      s += rule_.weights[i] * 2.0 * r2 * v_(x0_ + r2 * d);
    }
    return s;
  }

 private:
  GridFunction v_;
  double x0_;
  QuadratureRule rule_;
};

// Taylor coefficients of f about x0 (coefficient k multiplies (x - x0)^k),
// by Clenshaw's recurrence carried out in series arithmetic.
inline TruncatedSeries<double> taylor_at(const GridFunction& f, double x0, std::size_t order) {
  const Interval& iv = f.interval();
  std::vector<double> tv(order + 1, 0.0);
  tv[0] = iv.to_ref(x0);
  if (order >= 1) tv[1] = 2.0 / iv.length();
  const TruncatedSeries<double> t(tv);
  const auto& c = f.coeffs();
  auto zero = TruncatedSeries<double>::constant(0.0, order);
  auto b1 = zero;
  auto b2 = zero;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    auto b0 = (t * b1) * 2.0 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

// Local expansion of the Langer-kind leading prefactor in powers of
// Delta = x - x_tp, given q = omega^2 / Delta as a series:
//   y0 = ((3/2) J)^{1/6} q^{-1/4},   J = sum_k [sqrt(q)]_k Delta^k / (k + 3/2).
// Generic in the coefficient ring so the exact turning-point engine reuses it.
template <class R>
TruncatedSeries<R> langer_prefactor_series(const TruncatedSeries<R>& q) {
  using T = ring_traits<R>;
  using S = typename T::scalar;
  const auto root = rpow(q, S(1) / S(2));
  std::vector<R> j;
  for (std::size_t k = 0; k <= q.order(); ++k) {
    j.push_back(T::scale(root[k], S(3) / S(static_cast<long>(2 * k + 3))));
  }
  return rpow(TruncatedSeries<R>(std::move(j)), S(1) / S(6)) * rpow(q, S(-1) / S(4));
}

}  // namespace uniwkb
