#pragma once

// Comparison function Omega^2 = e^sigma - 1 (simple turning point, asymmetric
// growth):
//   omega^2 y^4 - (omega^2)' y^6 - 4 omega^2 y' y^5 + 1
//     - eps (y'' y^3 - 3 y'' y' y^4 - y''' y^5) = 0.
//
// Leading order: with v = omega y0^2, 2v - 2 arctan v = int_{x_tp}^x omega dx.
// In regularized form (v^2 = Delta q Y^4, Y = y0) this reads
//   q^{3/2} Y^6 h(Delta q Y^4) = J_1(x),   2v - 2 arctan v = v^3 h(v^2),
// solved pointwise for Y by bracketed root finding. Only the omega^2 > 0 side
// [x_tp, hi] is computed.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/langer_linear.hpp"
#include "uniwkb/pinney_const.hpp"
#include "uniwkb/turning_point.hpp"

namespace uniwkb {

// h(s) = (2 sqrt(s) - 2 arctan sqrt(s)) / s^{3/2}, h(0) = 2/3.
inline double exp_profile(double s) {
  if (s < 0.25) {
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      sum += term / (2 * k + 3);
      term *= -s;
    }
    return 2.0 * sum;
  }
  const double v = std::sqrt(s);
  return (2.0 * v - 2.0 * std::atan(v)) / (s * v);
}

// Solves c q^{3/2} Y^6 profile(Delta q Y^4) = J for Y > 0, where profile
// decreases from profile(0) = p0. The solution is at least the value obtained
// with profile replaced by p0, which starts a geometric bracket search.
template <class Profile>
double solve_prefactor(double q, double delta, double j, double c, double p0, Profile&& profile) {
  if (!(j > 0.0) || !(q > 0.0)) throw DomainError("prefactor equation needs positive right-hand side");
  const double q32 = q * std::sqrt(q);
  auto g = [&](double Y) {
    const double y2 = Y * Y;
    return c * q32 * y2 * y2 * y2 * profile(delta * q * y2 * y2) - j;
  };
  const double lo = std::pow(j / (c * q32 * p0), 1.0 / 6.0);
  double hi = lo;
  double glo = g(lo);
  if (glo >= 0.0) return lo;
  for (int i = 0; i < 200; ++i) {
    hi *= 2.0;
    if (g(hi) >= 0.0) return bracketed_root(g, lo, hi);
  }
  throw NoBracketedRoot("prefactor equation: bracket search did not terminate");
}

// G = exp(-int_{anchor}^x dx / y0^2).
inline GridFunction damping_factor(const GridFunction& y0, double anchor, const SolverOptions& opt = {}) {
  for (double x : probe_points(y0.interval(), 400)) {
    if (!(y0(x) > 0.0)) throw DomainError("damping factor needs a positive prefactor");
  }
  const GridFunction inv = fit([&](double x) { return 1.0 / (y0(x) * y0(x)); }, y0.interval(), opt.fit());
  const GridFunction expo = antideriv(inv, anchor);
  return fit([&](double x) { return std::exp(-expo(x)); }, y0.interval(), opt.fit());
}

struct ExpExpansion {
  // omega^2 restricted to the working interval [x_tp, hi]
  GridFunction omega2;
  double x_tp;
  double eps;
  GridFunction q;
  GridFunction sqrt_q;
  EpsSeries ys;
  GridFunction damping;
  std::vector<double> order_residuals;
};

namespace detail {

struct ExpSetup {
  GridFunction omega2, q, sqrt_q;
  double x_tp;
};

inline ExpSetup exp_setup(const GridFunction& omega2_full, std::optional<double> anchor, const SolverOptions& opt) {
  const double x_tp = langer_turning_point(omega2_full, anchor);
  if (!(x_tp < omega2_full.interval().hi())) throw TurningPointError("no omega^2 > 0 region to the right of x_tp");
  const Interval work(x_tp, omega2_full.interval().hi());
  GridFunction w = restrict_to(omega2_full, work, opt.fit());
  GridFunction q = deflate(w, x_tp, opt.fit());
  for (double x : probe_points(work, 400)) {
    if (!(q(x) > 0.0)) throw TurningPointError("omega^2 has a further zero in the working region");
  }
  GridFunction sq = fit([&](double x) { return std::sqrt(q(x)); }, work, opt.fit());
  return {std::move(w), std::move(q), std::move(sq), x_tp};
}

}  // namespace detail

inline GridFunction exp_leading_order_on(const GridFunction& omega2, const GridFunction& q, const GridFunction& sqrt_q,
                                         double x_tp, const SolverOptions& opt) {
  const RegularizedIntegral j1(sqrt_q, x_tp);
  return fit([&](double x) { return solve_prefactor(q(x), x - x_tp, j1(x), 1.0, 2.0 / 3.0, exp_profile); },
             omega2.interval(), opt.fit());
}

// y0 on [x_tp, hi] from the implicit leading-order relation.
inline GridFunction exp_leading_order(const GridFunction& omega2, std::optional<double> anchor = std::nullopt,
                                      const SolverOptions& opt = {}) {
  const auto s = detail::exp_setup(omega2, anchor, opt);
  return exp_leading_order_on(s.omega2, s.q, s.sqrt_q, s.x_tp, opt);
}

// y_n = -J_{sqrt(q) G F_n} / (4 q^{3/2} y0^5 G).
inline GridFunction exp_from_forcing(const GridFunction& q, const GridFunction& sqrt_q, double x_tp,
                                     const GridFunction& y0, const GridFunction& g, const GridFunction& forcing,
                                     std::size_t n, const SolverOptions& opt) {
  try {
    const RegularizedIntegral j(sqrt_q * g * forcing, x_tp);
    return fit(
        [&](double x) {
          const double qq = q(x);
          return -j(x) / (4.0 * qq * std::sqrt(qq) * std::pow(y0(x), 5) * g(x));
        },
        y0.interval(), opt.fit(y0.max_abs()));
  } catch (const UnresolvedFunction& e) {
    throw UnresolvedFunction("exp kind, order " + std::to_string(n) + ": " + e.what(), e.achieved_residual());
  }
}

inline GridFunction exp_next_order(const ExpExpansion& e, const EpsSeries& ys, std::size_t n,
                                   const SolverOptions& opt = {}) {
  if (n == 0 || n > ys.order() + 1) throw StructuralError("exp next_order needs orders 0..n-1");
  const OrderEvaluator ev(Kind::exp, ys.truncated(n - 1), e.omega2);
  const GridFunction forcing = fit([&](double x) { return ev.forcing(x, n); }, e.omega2.interval(), opt.fit(1.0));
  return exp_from_forcing(e.q, e.sqrt_q, e.x_tp, ys[0], e.damping, forcing, n, opt);
}

inline ExpExpansion exp_expand(const GridFunction& omega2, double eps, std::size_t order,
                               std::optional<double> anchor = std::nullopt, const SolverOptions& opt = {}) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  auto s = detail::exp_setup(omega2, anchor, opt);
  GridFunction y0 = exp_leading_order_on(s.omega2, s.q, s.sqrt_q, s.x_tp, opt);
  GridFunction g = damping_factor(y0, s.x_tp, opt);
  ExpExpansion e{s.omega2, s.x_tp, eps, s.q, s.sqrt_q, make_eps_series({y0}), g, {}};
  std::vector<GridFunction> ys{y0};
  e.order_residuals.push_back(detail::checked_order_residual(Kind::exp, make_eps_series(ys), e.omega2, 0, 0.0, 1.0, opt));
  for (std::size_t n = 1; n <= order; ++n) {
    ys.push_back(exp_next_order(e, make_eps_series(ys), n, opt));
    e.order_residuals.push_back(
        detail::checked_order_residual(Kind::exp, make_eps_series(ys), e.omega2, n, 0.0, 1.0, opt));
  }
  e.ys = make_eps_series(std::move(ys));
  return e;
}

// Residual of -4 omega^2 y0^5 y_n' + (4 omega^2 y0^3 - 20 omega^2 y0' y0^4 - 6 (omega^2)' y0^5) y_n - F_n.
inline double exp_linear_residual(const ExpExpansion& e, std::size_t n) {
  const OrderEvaluator ev(Kind::exp, e.ys.truncated(n - 1), e.omega2);
  const GridFunction wd = deriv(e.omega2);
  const GridFunction y0d = deriv(e.ys[0]);
  const GridFunction ynd = deriv(e.ys[n]);
  double worst = 0.0;
  for (double x : probe_points(e.omega2.interval(), 400)) {
    const double w = e.omega2(x), y0 = e.ys[0](x);
    const double lhs = -4 * w * std::pow(y0, 5) * ynd(x) +
                       (4 * w * std::pow(y0, 3) - 20 * w * y0d(x) * std::pow(y0, 4) - 6 * wd(x) * std::pow(y0, 5)) *
                           e.ys[n](x);
    worst = std::max(worst, std::abs(lhs - ev.forcing(x, n)));
  }
  return worst;
}

// Printed forcings F_1, F_2 (cross-check only), with omega' omega = (omega^2)'/2.
inline double exp_printed_forcing_at(std::size_t n, const std::vector<Jet<double>>& y, double w, double wd) {
  const double wdw = 0.5 * wd;
  const auto& a = y[0];
  const double p2 = a.y * a.y, p3 = p2 * a.y, p4 = p3 * a.y, p5 = p4 * a.y;
  if (n == 1) return a.d2 * p3 - 3 * a.d2 * a.d1 * p4 - a.d3 * p5;
  if (n == 2) {
    const auto& b = y[1];
    return -5 * w * b.y * b.y * p2 + 30 * wdw * b.y * b.y * p4 + 20 * w * b.d1 * b.y * p4 +
           40 * w * a.d1 * b.y * b.y * p3 + b.d2 * p5 + 5 * a.d1 * b.y * p4 - 3 * b.d2 * a.d1 * p4 -
           3 * a.d2 * b.d1 * p4 - 12 * a.d2 * a.d1 * b.y * p3 - b.d3 * p5 - 5 * a.d3 * b.y * p4;
  }
  throw DomainError("printed forcings exist for n = 1, 2 only");
}

inline GridFunction exp_printed_forcing(const ExpExpansion& e, std::size_t n, const SolverOptions& opt = {}) {
  if (n < 1 || n > 2) throw DomainError("printed forcings exist for n = 1, 2 only");
  if (e.ys.order() + 1 < n) throw StructuralError("printed forcing F_n needs orders 0..n-1");
  std::vector<JetFunctions> jets;
  for (std::size_t k = 0; k < n; ++k) jets.emplace_back(e.ys[k]);
  const GridFunction wd = deriv(e.omega2);
  return fit(
      [&](double x) {
        std::vector<Jet<double>> y;
        for (const auto& j : jets) y.push_back(j.at(x));
        return exp_printed_forcing_at(n, y, e.omega2(x), wd(x));
      },
      e.omega2.interval(), opt.fit(1.0));
}

inline GridFunction exp_printed_order(const ExpExpansion& e, std::size_t n, const SolverOptions& opt = {}) {
  return exp_from_forcing(e.q, e.sqrt_q, e.x_tp, e.ys[0], e.damping, exp_printed_forcing(e, n, opt), n, opt);
}

// Mechanical forcing F_n as a function on the working interval.
inline GridFunction exp_forcing(const ExpExpansion& e, std::size_t n, const SolverOptions& opt = {}) {
  const OrderEvaluator ev(Kind::exp, e.ys.truncated(n - 1), e.omega2);
  return fit([&](double x) { return ev.forcing(x, n); }, e.omega2.interval(), opt.fit(1.0));
}

}  // namespace uniwkb
