#pragma once

// Comparison function Omega^2 = sigma (one simple turning point):
//   (omega^2)' y^6 + 4 omega^2 y' y^5 - 1 - eps (3 y'' y' y^4 + y''' y^5) = 0.
//
// Order n solves 4 omega^2 y0^5 y_n' + (6 (omega^2)' y0^5 + 20 omega^2 y0' y0^4) y_n = F_n,
// i.e. (4/omega)(omega^3 y0^5 y_n)' = F_n, integrated from the turning point:
//   y_n = J_{sqrt(q) F_n} / (4 q^{3/2} y0^5),   omega^2 = (x - x_tp) q.
// The same expression continues analytically to the omega^2 < 0 side.

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/pinney_const.hpp"
#include "uniwkb/turning_point.hpp"

namespace uniwkb {

// The single increasing simple zero of omega^2 used by the Langer kind.
inline double langer_turning_point(const GridFunction& omega2, std::optional<double> hint = std::nullopt) {
  double x_tp;
  if (hint) {
    if (!omega2.interval().contains(*hint)) throw ConfigError("turning-point anchor outside the interval");
    const auto zs = find_zeros(omega2);
    if (zs.empty()) throw TurningPointError("omega^2 has no zero in the interval");
    x_tp = zs.front();
    for (double z : zs) {
      if (std::abs(z - *hint) < std::abs(x_tp - *hint)) x_tp = z;
    }
  } else {
    const auto zs = find_zeros(omega2);
    if (zs.size() != 1) {
      throw TurningPointError("linear comparison needs exactly one turning point, found " +
                              std::to_string(zs.size()));
    }
    x_tp = zs.front();
  }
  const double g1 = simple_zero_slope(omega2, x_tp);
  if (g1 < 0.0) {
    throw TurningPointError(
        "omega^2 decreases through the turning point; reflect the problem (x -> -x) so that omega^2 increases");
  }
  return x_tp;
}

// Leading prefactor y0 = |omega|^{-1/2} ((3/2) |int_{x_tp}^x omega dx|)^{1/6}, with a
// local Taylor branch for |x - x_tp| <= delta.
class LangerPrefactor {
 public:
  LangerPrefactor(const GridFunction& omega2, double x_tp, const SolverOptions& opt = {})
      : omega2_(omega2),
        x_tp_(x_tp),
        q_(deflate(omega2, x_tp, opt.fit())),
        sqrt_q_(make_sqrt_q(q_, opt)),
        j1_(sqrt_q_, x_tp),
        delta_(opt.stitch_fraction * omega2.interval().length()) {
    // Taylor coefficients of q from those of omega^2 (exact for the polynomial).
    const auto w = taylor_at(omega2, x_tp, opt.local_order + 1);
    std::vector<double> qc(opt.local_order + 1);
    for (std::size_t k = 0; k <= opt.local_order; ++k) qc[k] = w[k + 1];
    local_ = langer_prefactor_series(TruncatedSeries<double>(qc)).coeffs();
  }

  double x_tp() const noexcept { return x_tp_; }
  double gamma1() const noexcept { return q_(x_tp_); }
  double stitch_radius() const noexcept { return delta_; }
  const GridFunction& q() const noexcept { return q_; }
  const GridFunction& sqrt_q() const noexcept { return sqrt_q_; }
  const std::vector<double>& local_coeffs() const noexcept { return local_; }

  // J_1 with int_{x_tp}^x |omega| = |x - x_tp|^{3/2} J_1(x).
  double j1(double x) const { return j1_(x); }

  double integral_branch(double x) const {
    const double d = std::abs(x - x_tp_);
    const double absw = std::abs(omega2_(x));
    return std::pow(absw, -0.25) * std::pow(1.5 * d * std::sqrt(d) * j1_(x), 1.0 / 6.0);
  }

  double series_branch(double x) const {
    const double d = x - x_tp_;
    double s = 0.0;
    for (std::size_t k = local_.size(); k-- > 0;) s = s * d + local_[k];
    return s;
  }

  double operator()(double x) const {
    return std::abs(x - x_tp_) <= delta_ ? series_branch(x) : integral_branch(x);
  }

 private:
  static GridFunction make_sqrt_q(const GridFunction& q, const SolverOptions& opt) {
    for (double x : probe_points(q.interval(), 400)) {
      if (!(q(x) > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "omega^2 has a further zero or sign change near x = " << x;
        throw TurningPointError(os.str());
      }
    }
    return fit([&](double x) { return std::sqrt(q(x)); }, q.interval(), opt.fit());
  }

  GridFunction omega2_;
  double x_tp_;
  GridFunction q_;
  GridFunction sqrt_q_;
  RegularizedIntegral j1_;
  double delta_;
  std::vector<double> local_;
};

struct LangerExpansion {
  GridFunction omega2;
  double x_tp;
  double eps;
  LangerPrefactor prefactor;
  // J_1 as a function: int_{x_tp}^x omega dx = (x - x_tp)^{3/2} phase_integral(x).
  GridFunction phase_integral;
  EpsSeries ys;
  std::vector<double> order_residuals;
};

inline GridFunction langer_leading_order(const GridFunction& omega2, double x_tp, const SolverOptions& opt = {}) {
  const LangerPrefactor p(omega2, x_tp, opt);
  return fit([&](double x) { return p(x); }, omega2.interval(), opt.fit());
}

// y_n from a forcing function by the regularized integrating factor.
inline GridFunction langer_from_forcing(const LangerPrefactor& p, const GridFunction& y0, const GridFunction& forcing,
                                        std::size_t n, const SolverOptions& opt) {
  try {
    const RegularizedIntegral j(p.sqrt_q() * forcing, p.x_tp());
    return fit(
        [&](double x) {
          const double q = p.q()(x);
          return j(x) / (4.0 * q * std::sqrt(q) * std::pow(y0(x), 5));
        },
        y0.interval(), opt.fit(y0.max_abs()));
  } catch (const UnresolvedFunction& e) {
    throw UnresolvedFunction("linear kind, order " + std::to_string(n) + ": " + e.what(), e.achieved_residual());
  }
}

inline GridFunction langer_next_order(const LangerPrefactor& p, const GridFunction& omega2, const EpsSeries& ys,
                                      std::size_t n, const SolverOptions& opt = {}) {
  if (n == 0 || n > ys.order() + 1) throw StructuralError("linear next_order needs orders 0..n-1");
  const OrderEvaluator ev(Kind::linear, ys.truncated(n - 1), omega2);
  GridFunction forcing = GridFunction::constant(omega2.interval(), 0.0);
  try {
    forcing = fit([&](double x) { return ev.forcing(x, n); }, omega2.interval(), opt.fit(1.0));
  } catch (const UnresolvedFunction& e) {
    throw UnresolvedFunction("linear kind, order " + std::to_string(n) + " forcing: " + e.what(),
                             e.achieved_residual());
  }
  return langer_from_forcing(p, ys[0], forcing, n, opt);
}

inline LangerExpansion langer_expand(const GridFunction& omega2, double eps, std::size_t order,
                                     std::optional<double> anchor = std::nullopt, const SolverOptions& opt = {}) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double x_tp = langer_turning_point(omega2, anchor);
  LangerPrefactor p(omega2, x_tp, opt);
  std::vector<GridFunction> ys{fit([&](double x) { return p(x); }, omega2.interval(), opt.fit())};
  std::vector<double> res{detail::checked_order_residual(Kind::linear, make_eps_series(ys), omega2, 0, 0.0, 1.0, opt)};
  for (std::size_t n = 1; n <= order; ++n) {
    ys.push_back(langer_next_order(p, omega2, make_eps_series(ys), n, opt));
    res.push_back(detail::checked_order_residual(Kind::linear, make_eps_series(ys), omega2, n, 0.0, 1.0, opt));
  }
  GridFunction phase = fit([&](double x) { return p.j1(x); }, omega2.interval(), opt.fit());
  return {omega2, x_tp, eps, std::move(p), std::move(phase), make_eps_series(std::move(ys)), std::move(res)};
}

// Residual of the order-n linear equation
// 4 omega^2 y0^5 y_n' + (6 (omega^2)' y0^5 + 20 omega^2 y0' y0^4) y_n - F_n, max over probes.
inline double langer_linear_residual(const LangerExpansion& e, std::size_t n) {
  const OrderEvaluator ev(Kind::linear, e.ys.truncated(n - 1), e.omega2);
  const GridFunction wd = deriv(e.omega2);
  const GridFunction y0d = deriv(e.ys[0]);
  const GridFunction ynd = deriv(e.ys[n]);
  double worst = 0.0;
  for (double x : probe_points(e.omega2.interval(), 400)) {
    const double w = e.omega2(x), y0 = e.ys[0](x);
    const double lhs = 4 * w * std::pow(y0, 5) * ynd(x) +
                       (6 * wd(x) * std::pow(y0, 5) + 20 * w * y0d(x) * std::pow(y0, 4)) * e.ys[n](x);
    worst = std::max(worst, std::abs(lhs - ev.forcing(x, n)));
  }
  return worst;
}

// Printed integrands of y_1, y_2, y_3 (cross-check only), written with
// omega' omega = (omega^2)'/2.
inline double langer_printed_integrand(std::size_t n, const std::vector<Jet<double>>& y, double w, double wd) {
  const double wdw = 0.5 * wd;  // omega' omega
  const auto& a = y[0];
  const double p4 = std::pow(a.y, 4), p5 = std::pow(a.y, 5), p3 = std::pow(a.y, 3), p2 = a.y * a.y;
  switch (n) {
    case 1:
      return 3 * a.d2 * a.d1 * p4 + a.d3 * p5;
    case 2: {
      const auto& b = y[1];
      return -30 * wdw * b.y * b.y * p4 - 20 * w * b.d1 * b.y * p4 - 40 * w * a.d1 * b.y * b.y * p4 +
             3 * b.d2 * a.d1 * p4 + 3 * a.d2 * b.d1 * p4 + b.d3 * p5 + 5 * a.d3 * b.y * p4;
    }
    case 3: {
      const auto& b = y[1];
      const auto& c = y[2];
      return -60 * wdw * c.y * b.y * p4 - 40 * wdw * b.y * b.y * b.y * p3 - 20 * w * c.d1 * b.y * p4 -
             80 * w * a.d1 * c.y * b.y * p3 + 3 * c.d2 * a.d1 * p4 + 3 * a.d2 * c.d1 * p4 +
             12 * a.d2 * a.d1 * c.y * p3 + 3 * b.d2 * b.d1 * p4 + 12 * b.d2 * a.d1 * b.y * p3 +
             12 * a.d2 * b.d1 * b.y * p3 + 18 * a.d2 * a.d1 * b.y * b.y * p2 + c.d3 * p5 + 5 * a.d3 * c.y * p4 +
             5 * b.d3 * b.y * p4 + 10 * a.d3 * b.y * b.y * p3;
    }
  }
  throw DomainError("printed integrands exist for n = 1, 2, 3 only");
}

inline GridFunction langer_printed_forcing(const LangerExpansion& e, std::size_t n, const SolverOptions& opt = {}) {
  if (n < 1 || n > 3) throw DomainError("printed integrands exist for n = 1, 2, 3 only");
  if (e.ys.order() + 1 < n) throw StructuralError("printed integrand for y_n needs orders 0..n-1");
  std::vector<JetFunctions> jets;
  for (std::size_t k = 0; k < n; ++k) jets.emplace_back(e.ys[k]);
  const GridFunction wd = deriv(e.omega2);
  return fit(
      [&](double x) {
        std::vector<Jet<double>> y;
        for (const auto& j : jets) y.push_back(j.at(x));
        return langer_printed_integrand(n, y, e.omega2(x), wd(x));
      },
      e.omega2.interval(), opt.fit(1.0));
}

// y_n obtained from the printed integrand.
inline GridFunction langer_printed_order(const LangerExpansion& e, std::size_t n, const SolverOptions& opt = {}) {
  return langer_from_forcing(e.prefactor, e.ys[0], langer_printed_forcing(e, n, opt), n, opt);
}

}  // namespace uniwkb
