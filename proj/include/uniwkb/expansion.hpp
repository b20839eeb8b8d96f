#pragma once

// One entry point over the four comparison kinds: a Problem goes in, an
// Expansion (working interval, eps-series, turning-point data) comes out.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/exp_comparison.hpp"
#include "uniwkb/langer_linear.hpp"
#include "uniwkb/pinney_const.hpp"
#include "uniwkb/quad_two_tp.hpp"

namespace uniwkb {

// How sigma is pinned at the turning point.
//   zero:       sigma(x_tp) is the zero of the comparison function.
//   consistent: sigma(x_tp) solves Omega^2(sigma) = omega^2 y^4 - eps y'' y^3
//               at the summed prefactor, which shifts it by O(eps).
enum class SigmaAnchor { zero, consistent };

struct Problem {
  explicit Problem(GridFunction w) : omega2(std::move(w)) {}

  GridFunction omega2;
  double eps = 1e-2;
  Kind kind = Kind::constant;
  std::size_t order = 0;
  // Picks the turning point closest to this abscissa (linear and exp kinds).
  std::optional<double> anchor;
  // Outer region for the quadratic kind.
  Side side = Side::right;
  SigmaAnchor sigma_anchor = SigmaAnchor::zero;
  SolverOptions opt;
};

struct Expansion {
  Kind kind;
  double eps;
  // omega^2 on the working interval
  GridFunction omega2;
  EpsSeries ys;
  std::vector<double> order_residuals;
  // all sign changes of omega^2 on the full interval
  std::vector<double> turning_points;
  // turning point adjacent to the working interval (turning-point kinds)
  std::optional<double> x_tp;
  // barrier parameter (quadratic kind)
  double a = 0.0;
  Side side = Side::right;

  double a2() const { return a * a; }
  const Interval& interval() const { return omega2.interval(); }
};

inline Expansion expand(const Problem& p) {
  const std::vector<double> tps = find_zeros(p.omega2);
  switch (p.kind) {
    case Kind::constant: {
      auto e = pinney_expand(p.omega2, p.eps, p.order, p.opt);
      return {Kind::constant, p.eps, e.omega2, e.ys, e.order_residuals, tps, std::nullopt, 0.0, Side::right};
    }
    case Kind::linear: {
      auto e = langer_expand(p.omega2, p.eps, p.order, p.anchor, p.opt);
      return {Kind::linear, p.eps, e.omega2, e.ys, e.order_residuals, tps, e.x_tp, 0.0, Side::right};
    }
    case Kind::exp: {
      auto e = exp_expand(p.omega2, p.eps, p.order, p.anchor, p.opt);
      return {Kind::exp, p.eps, e.omega2, e.ys, e.order_residuals, tps, e.x_tp, 0.0, Side::right};
    }
    case Kind::quadratic: {
      auto e = quad_expand(p.omega2, p.eps, p.order, p.side, p.opt);
      return {Kind::quadratic, p.eps, e.omega2, e.ys, e.order_residuals, tps, e.x_tp(), e.a, e.side};
    }
  }
  throw ConfigError("unknown comparison kind");
}

}  // namespace uniwkb
