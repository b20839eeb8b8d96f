#pragma once

// Brute-force reference solutions: adaptive integration of second-order ODEs
// u'' = F(x, u, u'), and residuals of the prefactor equations.
//
// Steps use the embedded Runge-Kutta-Fehlberg 7(8) pair with a controller on
// the envelope norm max(|u|, w |u'|). Dense output is quintic Hermite
// interpolation from (u, u', u'') at the step ends. For linear equations the
// state is renormalized whenever it leaves [1e-100, 1e100], and the removed
// factors are kept as a per-node log scale.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "uniwkb/eps_series.hpp"
#include "uniwkb/equations.hpp"
#include "uniwkb/errors.hpp"
#include "uniwkb/funcspace.hpp"
#include "uniwkb/scaled.hpp"

namespace uniwkb {

using SecondOrderRhs = std::function<double(double x, double u, double du)>;

struct OdeOptions {
  double rtol = 1e-12;
  // Weight of u' against u in the error norm (a length scale).
  double deriv_weight = 1.0;
  // Integration runs in t = x / stretch.
  double stretch = 1.0;
  // Linear equations may be renormalized.
  bool linear = false;
  std::size_t max_steps = 5'000'000;
};

class OdeSolution {
 public:
  struct Node {
    double x, u, du, ddu, log_scale;
  };

  OdeSolution(std::vector<Node> nodes, double error_estimate, std::size_t steps)
      : nodes_(std::move(nodes)), error_(error_estimate), steps_(steps) {}

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  Interval span() const { return {nodes_.front().x, nodes_.back().x}; }
  // Largest accepted local error relative to the state envelope.
  double error_estimate() const noexcept { return error_; }
  std::size_t steps() const noexcept { return steps_; }

  ScaledValue value(double x) const { return eval(x, 0); }
  ScaledValue derivative(double x) const { return eval(x, 1); }
  double operator()(double x) const { return value(x).to_double(); }
  double deriv(double x) const { return derivative(x).to_double(); }

 private:
  ScaledValue eval(double x, int d) const {
    const Interval sp = span();
    if (!sp.contains(x, 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "x = " << x << " outside the integrated span " << to_string(sp);
      throw DomainError(os.str());
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x, [](double v, const Node& n) { return v < n.x; });
    std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
    const Node& a = nodes_[i];
    const Node& b = nodes_[i + 1];
    const double h = b.x - a.x;
    const double s = std::clamp((x - a.x) / h, 0.0, 1.0);
    const double r = std::exp(b.log_scale - a.log_scale);
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double v;
    if (d == 0) {
      const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
      const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
      const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
      const double h3 = 10 * s3 - 15 * s4 + 6 * s5;
      const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
      const double h5 = 0.5 * (s3 - 2 * s4 + s5);
      v = h0 * a.u + h * h1 * a.du + h * h * h2 * a.ddu + r * (h3 * b.u + h * h4 * b.du + h * h * h5 * b.ddu);
    } else {
      const double h0 = (-30 * s2 + 60 * s3 - 30 * s4) / h;
      const double h1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
      const double h2 = 0.5 * h * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
      const double h3 = (30 * s2 - 60 * s3 + 30 * s4) / h;
      const double h4 = -12 * s2 + 28 * s3 - 15 * s4;
      const double h5 = 0.5 * h * (3 * s2 - 8 * s3 + 5 * s4);
      v = h0 * a.u + h1 * a.du + h2 * a.ddu + r * (h3 * b.u + h4 * b.du + h5 * b.ddu);
    }
    return ScaledValue::normalized(v, a.log_scale);
  }

  std::vector<Node> nodes_;
  double error_;
  std::size_t steps_;
};

namespace detail {

struct Sweep {
  std::vector<OdeSolution::Node> nodes;
  double error = 0.0;
  std::size_t steps = 0;
};

// One direction from x0 to x1 (x1 may be below x0).
inline Sweep integrate_sweep(const SecondOrderRhs& rhs, double x0, double u0, double du0, double x1,
                             const OdeOptions& opt) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double ell = opt.stretch;
  // State (u, v) with v = du/dt = ell u'.
  auto sys = [&](const State& s, State& ds, double t) {
    const double x = x0 + ell * t;
    ds[0] = s[1];
    ds[1] = ell * ell * rhs(x, s[0], s[1] / ell);
  };
  ode::runge_kutta_fehlberg78<State> stepper;
  const double w = opt.deriv_weight / ell;
  auto envelope = [&](const State& s) { return std::max(std::abs(s[0]), w * std::abs(s[1])); };

  Sweep out;
  State st{u0, ell * du0};
  double log_scale = 0.0;
  auto record = [&](double t) {
    const double x = x0 + ell * t;
    out.nodes.push_back({x, st[0], st[1] / ell, rhs(x, st[0], st[1] / ell), log_scale});
  };
  record(0.0);
  const double T = (x1 - x0) / ell;
  if (T == 0.0) return out;
  const double dir = T > 0 ? 1.0 : -1.0;
  double t = 0.0;
  double dt = dir * std::abs(T) * 1e-3;
  const double min_dt = 1e-14 * std::abs(T);
  // Quintic Hermite dense output loses accuracy like (k h)^6 / 720; capping
  // k h at 0.03 keeps it at the 1e-12 level.
  const double max_dt = 0.03 * w;
  while (dir * (T - t) > 0.0) {
    if (std::abs(dt) > max_dt) dt = dir * max_dt;
    bool last = false;
    if (dir * (t + dt - T) >= 0.0) {
      dt = T - t;
      last = true;
    }
    State trial = st;
    State err{0.0, 0.0};
    stepper.do_step(sys, trial, t, dt, err);
    const double scale = std::max(envelope(st), envelope(trial));
    const double norm = std::max(std::abs(err[0]), w * std::abs(err[1])) / (opt.rtol * std::max(scale, 1e-300));
    if (++out.steps > opt.max_steps) throw IntegrationError("integration exceeded the step budget");
    if (std::isfinite(norm) && norm <= 1.0) {
      t = last ? T : t + dt;
      st = trial;
      out.error = std::max(out.error, norm * opt.rtol);
      if (opt.linear) {
        const double m = envelope(st);
        if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
          st[0] /= m;
          st[1] /= m;
          log_scale += std::log(m);
        }
      } else if (!std::isfinite(st[0]) || !std::isfinite(st[1])) {
        throw IntegrationError("state became nonfinite");
      }
      record(t);
      const double grow = norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -1.0 / 8.0));
      dt *= grow;
    } else {
      const double shrink = std::isfinite(norm) ? std::max(0.1, 0.9 * std::pow(norm, -1.0 / 8.0)) : 0.1;
      dt *= shrink;
      if (std::abs(dt) < min_dt) {
        std::ostringstream os;
        os.precision(17);
        os << "step size underflow near x = " << x0 + ell * t
           << "; the problem is too stiff at this eps, split the interval";
        throw IntegrationError(os.str());
      }
    }
  }
  return out;
}

}  // namespace detail

// Integrates u'' = rhs(x, u, u') over span from data at x0 (inside span).
inline OdeSolution integrate_second_order(const SecondOrderRhs& rhs, double x0, double u0, double du0,
                                          const Interval& span, const OdeOptions& opt = {}) {
  if (!span.contains(x0, 1e-12)) throw DomainError("initial point outside the integration span");
  const detail::Sweep back = detail::integrate_sweep(rhs, x0, u0, du0, span.lo(), opt);
  const detail::Sweep fwd = detail::integrate_sweep(rhs, x0, u0, du0, span.hi(), opt);
  std::vector<OdeSolution::Node> nodes(back.nodes.rbegin(), back.nodes.rend());
  nodes.insert(nodes.end(), fwd.nodes.begin() + 1, fwd.nodes.end());
  if (nodes.size() < 2) throw DomainError("integration span is empty");
  return {std::move(nodes), std::max(back.error, fwd.error), back.steps + fwd.steps};
}

// u'' = omega2(x) u / eps. omega2_max bounds |omega^2| and sets the norm weight.
inline OdeSolution integrate_linear(const std::function<double(double)>& omega2, double omega2_max, double eps,
                                    double x0, double u0, double du0, const Interval& span, double rtol = 1e-12) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  OdeOptions opt;
  opt.rtol = rtol;
  opt.linear = true;
  opt.stretch = eps < 1e-6 ? std::sqrt(eps) : 1.0;
  opt.deriv_weight = omega2_max > 0.0 ? std::min(span.length(), std::sqrt(eps / omega2_max)) : span.length();
  return integrate_second_order([&](double x, double u, double) { return omega2(x) * u / eps; }, x0, u0, du0, span,
                                opt);
}

inline OdeSolution integrate_linear(const GridFunction& omega2, double eps, double x0, double u0, double du0,
                                    const Interval& span, double rtol = 1e-12) {
  return integrate_linear([&](double x) { return omega2(x); }, omega2.max_abs(), eps, x0, u0, du0, span, rtol);
}

// u'' + omega^2 u = 0.
inline OdeSolution integrate_oscillator(const GridFunction& omega2, double x0, double u0, double du0,
                                        const Interval& span, double rtol = 1e-12) {
  OdeOptions opt;
  opt.rtol = rtol;
  opt.linear = true;
  opt.deriv_weight = std::min(span.length(), 1.0 / std::sqrt(std::max(omega2.max_abs(), 1e-300)));
  return integrate_second_order([&](double x, double u, double) { return -omega2(x) * u; }, x0, u0, du0, span, opt);
}

// rho'' + omega^2 rho = alpha / rho^3.
inline OdeSolution integrate_ermakov(const GridFunction& omega2, double alpha, double x0, double rho0, double drho0,
                                     const Interval& span, double rtol = 1e-12) {
  if (!(rho0 != 0.0)) throw DomainError("Ermakov integration needs rho(x0) != 0");
  OdeOptions opt;
  opt.rtol = rtol;
  opt.deriv_weight = std::min(span.length(), 1.0 / std::sqrt(std::max(omega2.max_abs(), 1e-300)));
  return integrate_second_order(
      [&](double x, double r, double) {
        if (r == 0.0) throw DomainError("rho vanished during Ermakov integration");
        return -omega2(x) * r + alpha / (r * r * r);
      },
      x0, rho0, drho0, span, opt);
}

// Pointwise residual of the kind's defining equation at a summed prefactor.
inline double residual_at(Kind kind, const JetFunctions& y, const GridFunction& omega2, const GridFunction& wd,
                          double x, double eps, double a2 = 0.0) {
  return equation_residual(kind, y.at(x), {omega2(x), wd(x), a2}, eps);
}

// Residual of the defining equation as a function (fixed-degree interpolant:
// its values sit near the rounding floor and need no convergence test).
inline GridFunction residual(Kind kind, const GridFunction& y, const GridFunction& omega2, double eps,
                             double a2 = 0.0) {
  if (!(y.interval() == omega2.interval())) throw StructuralError("prefactor and omega^2 on different intervals");
  const JetFunctions j(y);
  const GridFunction wd = deriv(omega2);
  return interpolate([&](double x) { return residual_at(kind, j, omega2, wd, x, eps, a2); }, y.interval(), 256);
}

inline GridFunction residual(Kind kind, const EpsSeries& ys, const GridFunction& omega2, double eps,
                             double a2 = 0.0) {
  return residual(kind, sum_at(ys, eps), omega2, eps, a2);
}

// max |residual| over probe points of a sub-interval (default: everywhere).
inline double residual_norm(Kind kind, const GridFunction& y, const GridFunction& omega2, double eps,
                            double a2 = 0.0, std::optional<Interval> where = std::nullopt) {
  const JetFunctions j(y);
  const GridFunction wd = deriv(omega2);
  double worst = 0.0;
  for (double x : probe_points(where.value_or(y.interval()), 1000)) {
    worst = std::max(worst, std::abs(residual_at(kind, j, omega2, wd, x, eps, a2)));
  }
  return worst;
}

// Least-squares slope of log(norm) against log(eps); eps must be geometric.
inline double convergence_slope(const std::vector<double>& eps, const std::vector<double>& norms) {
  if (eps.size() < 3 || eps.size() != norms.size()) {
    throw ConfigError("convergence slope needs at least three (eps, norm) pairs");
  }
  const double ratio = eps[1] / eps[0];
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || std::abs(eps[i] / eps[i - 1] - ratio) > 1e-9 * std::abs(ratio) || ratio == 1.0) {
      throw ConfigError("eps values must form a geometric sequence");
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(norms[i] > 0.0)) throw ConfigError("convergence slope needs positive norms");
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(norms[i]));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace uniwkb
