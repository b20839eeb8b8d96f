#pragma once

// Comparison function Omega^2 = sigma^2 - a^2 (two simple turning points
// x_- < x_+, barrier between them). With
//   A = (omega^2)' y^6 + 4 omega^2 y' y^5,   B = 3 y'' y' y^4 + y''' y^5,
// the prefactor obeys 2 sigma = A - eps B with
// sigma^2 = omega^2 y^4 + a^2 - eps y'' y^3; the recurrences come from the
// squared form
//   A^2 - 4 omega^2 y^4 - 4 a^2 + eps (4 y'' y^3 - 2 A B) + eps^2 B^2 = 0.
//
// Leading order, with w = omega y0^2:
//   w sqrt(w^2 + a^2) - a^2 asinh(w / a) = 2 int_{x_+}^x omega dx,
// solved in regularized form q^{3/2} Y^6 h(Delta q Y^4) = 2 J_1(x).
//
// Order n: f y_n' + g y_n = F_n with f = omega^2 fh and
// g = (3/2) (omega^2)' fh + omega^2 gh, where
//   fh = 8 (omega^2)' y0^11 + 32 omega^2 y0' y0^10,
//   gh = 160 omega^2 y0'^2 y0^9 + 40 (omega^2)' y0' y0^10 - 16 y0^3.
// The integrating factor is G = omega^3 Gh, Gh = exp(int_{x_+} gh / fh), and
//   y_n = J_{sqrt(q) Gh F_n / fh} / (q^{3/2} Gh).
//
// Only the outer regions (omega^2 > 0) are computed. The left region is
// solved as the right region of the reflected problem: the squared equation is
// invariant under x -> -x, y(x) = y~(-x) and sigma(x) = -sigma~(-x).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/exp_comparison.hpp"
#include "uniwkb/pinney_const.hpp"
#include "uniwkb/turning_point.hpp"

namespace uniwkb {

enum class Side { right, left };

struct BarrierZeros {
  double minus;
  double plus;
};

// The two simple zeros of omega^2, with omega^2 < 0 between them.
inline BarrierZeros barrier_zeros(const GridFunction& omega2) {
  const auto zs = find_zeros(omega2);
  if (zs.size() != 2) {
    throw TurningPointError("quadratic kind needs exactly two simple zeros of omega^2, found " +
                            std::to_string(zs.size()));
  }
  const double sm = simple_zero_slope(omega2, zs[0]);
  const double sp = simple_zero_slope(omega2, zs[1]);
  if (!(sm < 0.0 && sp > 0.0)) {
    throw TurningPointError("quadratic kind needs omega^2 < 0 between its zeros (barrier shape)");
  }
  return {zs[0], zs[1]};
}

// a with a^2 = (2/pi) int_{x_-}^{x_+} |omega| dx. With x = c + h cos(theta)
// and omega^2 = (x - x_-)(x - x_+) r(x), the integral is
// h^2 int_0^pi sin^2(theta) sqrt(r) dtheta with a smooth integrand.
inline double barrier_parameter(const GridFunction& omega2, double x_minus, double x_plus,
                                const SolverOptions& opt = {}) {
  if (!(x_minus < x_plus)) throw TurningPointError("barrier zeros out of order");
  const GridFunction inner = restrict_to(omega2, Interval(x_minus, x_plus), opt.fit());
  const GridFunction r = deflate(deflate(inner, x_minus, opt.fit()), x_plus, opt.fit());
  const double c = 0.5 * (x_minus + x_plus);
  const double h = 0.5 * (x_plus - x_minus);
  const QuadratureRule rule = gauss_legendre_unit(std::max<std::size_t>(64, 2 * r.degree() + 16));
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double th = std::numbers::pi * rule.nodes[i];
    const double rv = r(c + h * std::cos(th));
    if (!(rv > 0.0)) throw TurningPointError("omega^2 has a further zero between the barrier zeros");
    const double sn = std::sin(th);
    s += rule.weights[i] * sn * sn * std::sqrt(rv);
  }
  const double integral = std::numbers::pi * h * h * s;
  return std::sqrt(2.0 / std::numbers::pi * integral);
}

// h(s) = H(sqrt(s)) / s^{3/2}, H(w) = w sqrt(w^2 + a^2) - a^2 asinh(w / a);
// h(0) = 2 / (3a).
inline double quad_profile(double s, double a) {
  const double t = s / (a * a);
  if (t < 0.25) {
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      sum += term / (2 * k + 3);
      term *= -t * (2 * k + 1) / (2.0 * (k + 1));
    }
    return 2.0 / a * sum;
  }
  const double w = std::sqrt(s);
  return (w * std::sqrt(s + a * a) - a * a * std::asinh(w / a)) / (s * w);
}

struct QuadExpansion {
  // omega^2 on the working region (original orientation)
  GridFunction omega2;
  double x_minus;
  double x_plus;
  double a;
  Side side;
  double eps;
  EpsSeries ys;
  // coefficients of the order-n equation f y_n' + g y_n = F_n
  GridFunction f_coeff;
  GridFunction g_coeff;
  // regular part Gh of the integrating factor G = omega^3 Gh
  GridFunction damping;
  std::vector<double> order_residuals;

  // Turning point adjacent to the working region.
  double x_tp() const { return side == Side::right ? x_plus : x_minus; }
  // Sign of sigma on the working region.
  double branch_sign() const { return side == Side::right ? 1.0 : -1.0; }
};

namespace detail {

// Right-region problem in solver orientation (turning point at the left end).
struct QuadWork {
  GridFunction omega2, q, sqrt_q;
  double x_tp;
};

inline QuadWork quad_work(const GridFunction& omega2_full, const BarrierZeros& z, Side side,
                          const SolverOptions& opt) {
  GridFunction w = side == Side::right ? omega2_full : omega2_full.reflected();
  const double x_tp = side == Side::right ? z.plus : -z.minus;
  if (!(x_tp < w.interval().hi())) throw TurningPointError("no omega^2 > 0 region outside the barrier on this side");
  w = restrict_to(w, Interval(x_tp, w.interval().hi()), opt.fit());
  GridFunction q = deflate(w, x_tp, opt.fit());
  for (double x : probe_points(w.interval(), 400)) {
    if (!(q(x) > 0.0)) throw TurningPointError("omega^2 has a further zero in the working region");
  }
  GridFunction sq = fit([&](double x) { return std::sqrt(q(x)); }, w.interval(), opt.fit());
  return {std::move(w), std::move(q), std::move(sq), x_tp};
}

inline GridFunction quad_leading_order_on(const QuadWork& k, double a, const SolverOptions& opt) {
  const RegularizedIntegral j1(k.sqrt_q, k.x_tp);
  auto profile = [a](double s) { return quad_profile(s, a); };
  return fit([&](double x) { return solve_prefactor(k.q(x), x - k.x_tp, j1(x), 0.5, 2.0 / (3.0 * a), profile); },
             k.omega2.interval(), opt.fit());
}

// fh and gh at a point (see the header comment).
inline std::pair<double, double> quad_regular_coeffs(const Jet<double>& y, double w, double wd) {
  const double y3 = y.y * y.y * y.y;
  const double y9 = y3 * y3 * y3;
  const double y10 = y9 * y.y;
  const double y11 = y10 * y.y;
  const double fh = 8.0 * wd * y11 + 32.0 * w * y.d1 * y10;
  const double gh = 160.0 * w * y.d1 * y.d1 * y9 + 40.0 * wd * y.d1 * y10 - 16.0 * y3;
  return {fh, gh};
}

struct QuadOrders {
  std::vector<GridFunction> ys;
  GridFunction fh, damping;
  std::vector<double> residuals;
};

inline GridFunction quad_from_forcing(const QuadWork& k, const GridFunction& fh, const GridFunction& gd,
                                      const GridFunction& forcing, std::size_t n, double scale,
                                      const SolverOptions& opt) {
  try {
    const RegularizedIntegral j(k.sqrt_q * gd * fit([&](double x) { return forcing(x) / fh(x); },
                                                    k.omega2.interval(), opt.fit(1.0)),
                                k.x_tp);
    return fit(
        [&](double x) {
          const double qq = k.q(x);
          return j(x) / (qq * std::sqrt(qq) * gd(x));
        },
        k.omega2.interval(), opt.fit(scale));
  } catch (const UnresolvedFunction& e) {
    throw UnresolvedFunction("quadratic kind, order " + std::to_string(n) + ": " + e.what(), e.achieved_residual());
  }
}

inline QuadOrders quad_solve(const QuadWork& k, double a, std::size_t order, const SolverOptions& opt) {
  const double a2 = a * a;
  GridFunction y0 = quad_leading_order_on(k, a, opt);
  const JetFunctions j0(y0);
  const GridFunction wd = deriv(k.omega2);
  for (double x : probe_points(k.omega2.interval(), 400)) {
    const double fh = quad_regular_coeffs(j0.at(x), k.omega2(x), wd(x)).first;
    if (!(fh > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "quadratic kind: linearization coefficient f vanishes near x = " << x;
      throw StructuralError(os.str());
    }
  }
  GridFunction fh = fit([&](double x) { return quad_regular_coeffs(j0.at(x), k.omega2(x), wd(x)).first; },
                        k.omega2.interval(), opt.fit());
  const GridFunction ratio = fit(
      [&](double x) {
        const auto c = quad_regular_coeffs(j0.at(x), k.omega2(x), wd(x));
        return c.second / c.first;
      },
      k.omega2.interval(), opt.fit(1.0));
  const GridFunction expo = antideriv(ratio, k.x_tp);
  GridFunction gd = fit([&](double x) { return std::exp(expo(x)); }, k.omega2.interval(), opt.fit());

  std::vector<GridFunction> ys{y0};
  // The squared equation carries an overall scale of order A^2 ~ 4 a^2.
  const double scale = std::max(1.0, 4.0 * a2);
  std::vector<double> res{checked_order_residual(Kind::quadratic, make_eps_series(ys), k.omega2, 0, a2, scale, opt)};
  for (std::size_t n = 1; n <= order; ++n) {
    const OrderEvaluator ev(Kind::quadratic, make_eps_series(ys), k.omega2, a2);
    const GridFunction forcing =
        fit([&](double x) { return ev.forcing(x, n); }, k.omega2.interval(), opt.fit(scale));
    ys.push_back(quad_from_forcing(k, fh, gd, forcing, n, y0.max_abs(), opt));
    res.push_back(checked_order_residual(Kind::quadratic, make_eps_series(ys), k.omega2, n, a2, scale, opt));
  }
  return {std::move(ys), std::move(fh), std::move(gd), std::move(res)};
}

// Checks the unsquared relation on the summed series: sigma must carry the
// side's sign, otherwise squaring picked up the spurious branch.
inline void check_branch(const QuadExpansion& e) {
  const GridFunction y = sum_at(e.ys, e.eps);
  const JetFunctions j(y);
  const GridFunction wd = deriv(e.omega2);
  const double s = e.branch_sign();
  for (double x : probe_points(e.omega2.interval(), 400)) {
    const Jet<double> yj = j.at(x);
    const double y4 = std::pow(yj.y, 4), y5 = y4 * yj.y, y6 = y5 * yj.y;
    const double A = wd(x) * y6 + 4.0 * e.omega2(x) * yj.d1 * y5;
    const double B = 3.0 * yj.d2 * yj.d1 * y4 + yj.d3 * y5;
    if (!(s * (A - e.eps * B) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "quadratic kind: spurious sign branch of the squared equation at x = " << x;
      throw StructuralError(os.str());
    }
  }
}

}  // namespace detail

inline QuadExpansion quad_expand(const GridFunction& omega2, double eps, std::size_t order, Side side = Side::right,
                                 const SolverOptions& opt = {}) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const BarrierZeros z = barrier_zeros(omega2);
  const double a = barrier_parameter(omega2, z.minus, z.plus, opt);
  const detail::QuadWork k = detail::quad_work(omega2, z, side, opt);
  detail::QuadOrders o = detail::quad_solve(k, a, order, opt);

  auto orient = [&](GridFunction f) { return side == Side::right ? f : f.reflected(); };
  std::vector<GridFunction> ys;
  for (auto& y : o.ys) ys.push_back(orient(std::move(y)));
  GridFunction w = orient(k.omega2);
  // f = omega^2 fh and g = (3/2)(omega^2)' fh + omega^2 gh, in the original orientation.
  const JetFunctions j0(ys[0]);
  const GridFunction wd = deriv(w);
  GridFunction fc = fit(
      [&](double x) { return linearization(Kind::quadratic, j0.at(x), {w(x), wd(x), a * a}).first; }, w.interval(),
      opt.fit(1.0));
  GridFunction gc = fit(
      [&](double x) { return linearization(Kind::quadratic, j0.at(x), {w(x), wd(x), a * a}).second; }, w.interval(),
      opt.fit(1.0));
  QuadExpansion e{std::move(w), z.minus, z.plus, a, side, eps, make_eps_series(std::move(ys)),
                  std::move(fc), std::move(gc), orient(std::move(o.damping)), std::move(o.residuals)};
  detail::check_branch(e);
  return e;
}

// Residual of f y_n' + g y_n - F_n on the working region.
inline double quad_linear_residual(const QuadExpansion& e, std::size_t n) {
  const OrderEvaluator ev(Kind::quadratic, e.ys.truncated(n - 1), e.omega2, e.a * e.a);
  const GridFunction ynd = deriv(e.ys[n]);
  double worst = 0.0;
  for (double x : probe_points(e.omega2.interval(), 400)) {
    worst = std::max(worst, std::abs(e.f_coeff(x) * ynd(x) + e.g_coeff(x) * e.ys[n](x) - ev.forcing(x, n)));
  }
  return worst;
}

// Printed implicit leading-order relation, LHS - RHS:
//   omega y0^3 - (a^2/omega) asinh(omega y0 / a) - (2/omega) int omega dx.
inline double quad_printed_implicit_defect(double omega, double y0, double a, double phase) {
  return omega * y0 * y0 * y0 - a * a / omega * std::asinh(omega * y0 / a) - 2.0 / omega * phase;
}

// Corrected relation, LHS - RHS:
//   omega y0^2 sqrt(omega^2 y0^4 + a^2) - a^2 asinh(omega y0^2 / a) - 2 int omega dx.
inline double quad_implicit_defect(double omega, double y0, double a, double phase) {
  const double v = omega * y0 * y0;
  return v * std::sqrt(v * v + a * a) - a * a * std::asinh(v / a) - 2.0 * phase;
}

// Printed F_1 (audit only), with omega' omega = (omega^2)'/2.
inline double quad_printed_f1(const Jet<double>& y0, const Jet<double>& y1, double w, double wd) {
  const double wdw = 0.5 * wd;
  const double p3 = std::pow(y0.y, 3), p9 = std::pow(y0.y, 9), p10 = p9 * y0.y, p11 = p10 * y0.y;
  return 48 * wdw * wdw * y1.y * p11 + 32 * y1.d1 * y0.d1 * p10 + 160 * w * w * y0.d1 * y0.d1 * y1.y * p9 +
         16 * wdw * w * y1.d1 * p11 + 176 * wdw * w * y0.d1 * y1.y * p10 - 16 * w * y1.y * p3 + 4 * y0.d2 * p3 -
         12 * wdw * y0.d2 * y0.d1 * p10 - 24 * y0.d2 * y0.d1 * y0.d1 * p9 - 4 * wdw * y0.d3 * p11 -
         8 * w * y0.d3 * y0.d1 * p10;
}

struct F1Audit {
  // max |printed - mechanical - (f y1' + g y1)|
  double literal_defect;
  // max |printed - mechanical - (f y1' + g y1) - dropped|, where `dropped`
  // restores the omega factors missing from two printed terms
  double defect_after_omega_factors;
  // max |f y1' + g y1|, for scale
  double linear_part;
};

// Compares the printed F_1 with the mechanical forcing. The printed sum
// follows the opposite eps sign convention, so the mechanical forcing is
// generated with that convention for the comparison.
inline F1Audit quad_f1_audit(const QuadExpansion& e) {
  const OrderEvaluator ev(Kind::quadratic, e.ys.truncated(0), e.omega2, e.a * e.a, QuadSign::printed);
  const JetFunctions j0(e.ys[0]);
  const JetFunctions j1(e.ys[1]);
  const GridFunction wd = deriv(e.omega2);
  F1Audit r{0.0, 0.0, 0.0};
  for (double x : probe_points(e.omega2.interval(), 400)) {
    const Jet<double> a = j0.at(x), b = j1.at(x);
    const double w = e.omega2(x);
    const auto [f, g] = linearization(Kind::quadratic, a, {w, wd(x), e.a * e.a});
    const double lin = f * b.d1 + g * b.y;
    const double diff = quad_printed_f1(a, b, w, wd(x)) - ev.forcing(x, 1) - lin;
    const double dropped =
        32 * b.d1 * a.d1 * std::pow(a.y, 10) * (1.0 - w * w) - 24 * a.d2 * a.d1 * a.d1 * std::pow(a.y, 9) * (1.0 - w);
    r.literal_defect = std::max(r.literal_defect, std::abs(diff));
    r.defect_after_omega_factors = std::max(r.defect_after_omega_factors, std::abs(diff - dropped));
    r.linear_part = std::max(r.linear_part, std::abs(lin));
  }
  return r;
}

}  // namespace uniwkb
