#pragma once

// Comparison function Omega^2 = 1: the standard Ermakov-Pinney equation
//   omega^2 y^4 - 1 - eps y'' y^3 = 0,
// solved order by order. Every order is algebraic in y_n.

#include <cstddef>
#include <sstream>
#include <vector>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/turning_point.hpp"

namespace uniwkb {

struct PinneyExpansion {
  GridFunction omega2;
  double eps;
  EpsSeries ys;
  // max |order-n residual| after solving order n
  std::vector<double> order_residuals;
};

namespace detail {

inline void require_positive(const GridFunction& w) {
  double lo = w(w.interval().lo());
  double at = w.interval().lo();
  for (double x : probe_points(w.interval(), std::max<std::size_t>(400, 8 * w.coeffs().size()))) {
    const double v = w(x);
    if (v < lo) {
      lo = v;
      at = x;
    }
  }
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "turning point present; wrong comparison kind (omega^2 = " << lo << " at x = " << at << ")";
    throw TurningPointError(os.str());
  }
}

// Verifies order n of a solved series and returns max |residual|.
inline double checked_order_residual(Kind kind, const EpsSeries& ys, const GridFunction& w, std::size_t n,
                                     double a2, double scale, const SolverOptions& opt) {
  const OrderEvaluator ev(kind, ys, w, a2);
  double worst = 0.0;
  for (double x : probe_points(w.interval(), 400)) worst = std::max(worst, std::abs(ev.residual(x, n)));
  if (worst > opt.check_tol * scale) {
    std::ostringstream os;
    os << to_string(kind) << " kind, order " << n << ": order equation residual " << worst
       << " exceeds " << opt.check_tol * scale;
    throw UnresolvedFunction(os.str(), worst / scale);
  }
  return worst;
}

}  // namespace detail

// y0 = omega^{-1/2}.
inline GridFunction pinney_leading_order(const GridFunction& omega2, const SolverOptions& opt = {}) {
  detail::require_positive(omega2);
  return fit([&](double x) { return 1.0 / std::sqrt(std::sqrt(omega2(x))); }, omega2.interval(), opt.fit());
}

// y_n = F_n / (4 omega^2 y0^3), with F_n the order-n forcing.
inline GridFunction pinney_next_order(const GridFunction& omega2, const EpsSeries& ys, std::size_t n,
                                      const SolverOptions& opt = {}) {
  if (n == 0 || n > ys.order() + 1) throw StructuralError("pinney next_order needs orders 0..n-1");
  const OrderEvaluator ev(Kind::constant, ys.truncated(n - 1), omega2);
  const GridFunction& y0 = ys[0];
  try {
    return fit(
        [&](double x) {
          const double y = y0(x);
          return ev.forcing(x, n) / (4.0 * omega2(x) * y * y * y);
        },
        omega2.interval(), opt.fit(y0.max_abs()));
  } catch (const UnresolvedFunction& e) {
    throw UnresolvedFunction("constant kind, order " + std::to_string(n) + ": " + e.what(), e.achieved_residual());
  }
}

inline PinneyExpansion pinney_expand(const GridFunction& omega2, double eps, std::size_t order,
                                     const SolverOptions& opt = {}) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  std::vector<GridFunction> ys{pinney_leading_order(omega2, opt)};
  std::vector<double> res{detail::checked_order_residual(Kind::constant, make_eps_series(ys), omega2, 0, 0.0, 1.0, opt)};
  for (std::size_t n = 1; n <= order; ++n) {
    ys.push_back(pinney_next_order(omega2, make_eps_series(ys), n, opt));
    res.push_back(detail::checked_order_residual(Kind::constant, make_eps_series(ys), omega2, n, 0.0, 1.0, opt));
  }
  return {omega2, eps, make_eps_series(std::move(ys)), std::move(res)};
}

// Printed closed forms for y1, y2, y3 (cross-check only):
//   y1 = y0''/(4 omega^2)
//   y2 = -6 y1^2/(4 y0) + y1''/(4 omega^2) + 3 y0'' y1/(4 omega^2 y0)
//   y3 = -y1^3/y0^2 - 3 y2 y1/y0 + y2''/(4 omega^2) + 3 y0'' y2/(4 omega^2 y0)
//        + 3 y1'' y1/(4 omega^2 y0) + 3 y0'' y1^2/(4 omega^2 y0^2)
inline GridFunction pinney_closed_form(const GridFunction& omega2, const EpsSeries& ys, std::size_t n,
                                       const SolverOptions& opt = {}) {
  if (n < 1 || n > 3) throw DomainError("printed closed forms exist for n = 1, 2, 3 only");
  if (ys.order() + 1 < n) throw StructuralError("closed form for y_n needs orders 0..n-1");
  std::vector<GridFunction> dd;
  for (std::size_t k = 0; k < n; ++k) dd.push_back(deriv(ys[k], 2));
  auto at = [&](std::size_t k, double x) { return ys[k](x); };
  return fit(
      [&](double x) {
        const double w4 = 4.0 * omega2(x);
        const double y0 = at(0, x);
        if (n == 1) return dd[0](x) / w4;
        const double y1 = at(1, x);
        if (n == 2) return -6.0 * y1 * y1 / (4.0 * y0) + dd[1](x) / w4 + 3.0 * dd[0](x) * y1 / (w4 * y0);
        const double y2 = at(2, x);
        return -y1 * y1 * y1 / (y0 * y0) - 3.0 * y2 * y1 / y0 + dd[2](x) / w4 + 3.0 * dd[0](x) * y2 / (w4 * y0) +
               3.0 * dd[1](x) * y1 / (w4 * y0) + 3.0 * dd[0](x) * y1 * y1 / (w4 * y0 * y0);
      },
      omega2.interval(), opt.fit(ys[0].max_abs()));
}

}  // namespace uniwkb
