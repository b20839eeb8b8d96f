#pragma once

// Uniform approximation u(x) = y(x) U(sigma(x)) from a computed expansion:
// phase, comparison solutions, assembly, oracle comparison, and the
// Ermakov-Lewis invariant.
//
// Comparison solutions U'' = Omega^2(sigma) U / eps use the basis fixed at the
// reference end sigma_ref of the sigma range farthest from the turning point
// (where Omega^2 > 0): the recessive branch has data (1, -kappa) there along
// the direction leaving the turning point, kappa = sqrt(Omega^2 / eps); the
// dominant branch is any independent solution, normalized to 1 at sigma_ref.
// U = c1 dominant + c2 recessive. For the constant kind the closed forms
// c1 e^{sigma/sqrt(eps)} + c2 e^{-sigma/sqrt(eps)} are used.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "uniwkb/expansion.hpp"
#include "uniwkb/oracle.hpp"
#include "uniwkb/scaled.hpp"

namespace uniwkb {

// sigma with sigma' = 1/y^2 and sigma(anchor) = value.
inline GridFunction phase(const GridFunction& y, double anchor, double value, const SolverOptions& opt = {}) {
  if (!y.interval().contains(anchor, 1e-12)) throw DomainError("phase anchor outside the interval");
  for (double x : probe_points(y.interval(), 400)) {
    if (!(y(x) > 0.0)) throw DomainError("phase needs a positive prefactor");
  }
  const GridFunction inv = fit([&](double x) { return 1.0 / (y(x) * y(x)); }, y.interval(), opt.fit());
  return antideriv(inv, anchor) + value;
}

inline std::function<double(double)> comparison_function(Kind kind, double a = 0.0) {
  switch (kind) {
    case Kind::constant: return [](double) { return 1.0; };
    case Kind::linear: return [](double s) { return s; };
    case Kind::exp: return [](double s) { return std::expm1(s); };
    case Kind::quadratic: return [a](double s) { return s * s - a * a; };
  }
  throw ConfigError("unknown comparison kind");
}

// Anchor point and sigma value there for an expansion and summed prefactor y.
inline std::pair<double, double> sigma_anchor(const Expansion& e, const GridFunction& y, SigmaAnchor mode) {
  if (e.kind == Kind::constant) return {e.interval().lo(), 0.0};
  const double x = *e.x_tp;
  const double s = e.kind == Kind::quadratic ? (e.side == Side::right ? 1.0 : -1.0) : 1.0;
  const double zero = e.kind == Kind::quadratic ? s * e.a : 0.0;
  if (mode == SigmaAnchor::zero) return {x, zero};
  // Omega^2(sigma) = omega^2 y^4 - eps y'' y^3 with omega^2(x_tp) = 0.
  const double yy = y(x);
  const double rhs = -e.eps * deriv(y, 2)(x) * yy * yy * yy;
  switch (e.kind) {
    case Kind::linear: return {x, rhs};
    case Kind::exp:
      if (!(rhs > -1.0)) throw DomainError("consistent anchor outside the range of e^sigma - 1");
      return {x, std::log1p(rhs)};
    case Kind::quadratic:
      if (!(e.a2() + rhs > 0.0)) throw DomainError("consistent anchor outside the range of sigma^2 - a^2");
      return {x, s * std::sqrt(e.a2() + rhs)};
    default: break;
  }
  throw ConfigError("unknown comparison kind");
}

class ComparisonSolution {
 public:
  // sigma_range must cover every sigma value that will be evaluated.
  ComparisonSolution(Kind kind, double eps, double a, const Interval& sigma_range, double c1, double c2,
                     double rtol = 1e-12)
      : kind_(kind), eps_(eps), c1_(c1), c2_(c2) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (kind == Kind::constant) {
      ref_ = sigma_range.hi();
      return;
    }
    const auto omega = comparison_function(kind, a);
    const bool left = kind == Kind::quadratic && sigma_range.hi() <= -a * (1.0 - 1e-9);
    ref_ = left ? sigma_range.lo() : sigma_range.hi();
    const double w_ref = omega(ref_);
    if (!(w_ref > 0.0)) throw DomainError("comparison function not positive at the reference end");
    const double kappa = std::sqrt(w_ref / eps);
    const double dir = left ? -1.0 : 1.0;
    const double pad = 1e-9 * std::max(sigma_range.length(), 1e-12);
    const Interval span(sigma_range.lo() - pad, sigma_range.hi() + pad);
    double wmax = 0.0;
    for (double s : probe_points(span, 200)) wmax = std::max(wmax, std::abs(omega(s)));
    recessive_.emplace(integrate_linear(omega, wmax, eps, ref_, 1.0, -dir * kappa, span, rtol));
    if (c1 == 0.0) return;
    // The dominant branch is started at the far end with data Wronskian-
    // complementary to the recessive one and integrated toward sigma_ref,
    // its stable direction, then normalized to 1 at sigma_ref.
    const double far = left ? sigma_range.hi() : sigma_range.lo();
    const ScaledValue r0 = recessive_->value(far), r1 = recessive_->derivative(far);
    const double base = std::max(r0.log_abs(), r1.log_abs());
    dominant_.emplace(integrate_linear(omega, wmax, eps, far, -r1.relative_to(base), r0.relative_to(base), span,
                                       rtol));
    const ScaledValue d_ref = dominant_->value(ref_);
    if (d_ref.is_zero()) throw IntegrationError("dominant comparison branch vanishes at the reference end");
    dominant_norm_ = {1.0 / d_ref.mantissa, -d_ref.log_scale};
  }

  Kind kind() const noexcept { return kind_; }
  double reference_sigma() const noexcept { return ref_; }

  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }

  ScaledValue value(double sigma) const { return eval(sigma, false, c1_, c2_); }
  ScaledValue derivative(double sigma) const { return eval(sigma, true, c1_, c2_); }
  // Other weights; a weight may be nonzero only if it was nonzero at construction.
  ScaledValue value(double sigma, double c1, double c2) const { return eval(sigma, false, c1, c2); }
  ScaledValue derivative(double sigma, double c1, double c2) const { return eval(sigma, true, c1, c2); }

 private:
  ScaledValue eval(double sigma, bool d, double c1, double c2) const {
    if (kind_ == Kind::constant) {
      const double k = 1.0 / std::sqrt(eps_);
      ScaledValue up = ScaledValue::exp_times(c1 * (d ? k : 1.0), k * sigma);
      ScaledValue down = ScaledValue::exp_times(c2 * (d ? -k : 1.0), -k * sigma);
      return up + down;
    }
    if ((c1 != 0.0 && !dominant_) || (c2 != 0.0 && !recessive_)) {
      throw ConfigError("comparison branch was not built for these weights");
    }
    ScaledValue r;
    if (c1 != 0.0) r = r + c1 * dominant_norm_ * (d ? dominant_->derivative(sigma) : dominant_->value(sigma));
    if (c2 != 0.0) r = r + c2 * (d ? recessive_->derivative(sigma) : recessive_->value(sigma));
    return r;
  }

  Kind kind_;
  double eps_;
  double c1_, c2_;
  double ref_ = 0.0;
  std::optional<OdeSolution> dominant_, recessive_;
  ScaledValue dominant_norm_{1.0, 0.0};
};

// Free-function form of the comparison solution for a single sigma.
inline ScaledValue comparison_solution(Kind kind, double eps, double sigma, double c1, double c2, double a = 0.0) {
  const double lo = std::min(sigma, kind == Kind::quadratic ? a : 0.0);
  const double hi = std::max({sigma, kind == Kind::quadratic ? a : 0.0, lo + 1.0});
  return ComparisonSolution(kind, eps, a, Interval(lo, hi), c1, c2).value(sigma);
}

struct UniformSolution {
  Kind kind;
  double eps;
  GridFunction y;
  GridFunction dy;
  GridFunction sigma;
  double c1, c2;
  std::shared_ptr<const ComparisonSolution> comparison;
  // abscissa where sigma reaches the reference end of the comparison basis
  double x_ref;
  // the opposite end of the interval
  double x_far;

  ScaledValue u(double x) const { return u(x, c1, c2); }
  ScaledValue du(double x) const { return du(x, c1, c2); }
  ScaledValue u(double x, double w1, double w2) const { return y(x) * comparison->value(sigma(x), w1, w2); }
  // u' = y' U + U_sigma / y
  ScaledValue du(double x, double w1, double w2) const {
    const double s = sigma(x);
    return dy(x) * comparison->value(s, w1, w2) + (1.0 / y(x)) * comparison->derivative(s, w1, w2);
  }
};

inline UniformSolution assemble(const Expansion& e, double c1 = 0.0, double c2 = 1.0,
                                SigmaAnchor mode = SigmaAnchor::zero, const SolverOptions& opt = {}) {
  GridFunction y = sum_at(e.ys, e.eps);
  const auto [xa, sa] = sigma_anchor(e, y, mode);
  GridFunction sigma = phase(y, xa, sa, opt);
  const Interval& iv = e.interval();
  const double s_lo = sigma(iv.lo()), s_hi = sigma(iv.hi());
  auto comp = std::make_shared<const ComparisonSolution>(e.kind, e.eps, e.a, Interval(std::min(s_lo, s_hi),
                                                                                          std::max(s_lo, s_hi)),
                                                         c1, c2);
  const double x_ref = std::abs(comp->reference_sigma() - s_lo) < std::abs(comp->reference_sigma() - s_hi)
                           ? iv.lo()
                           : iv.hi();
  const double x_far = x_ref == iv.lo() ? iv.hi() : iv.lo();
  GridFunction dy = deriv(y);
  return {e.kind, e.eps, std::move(y), std::move(dy), std::move(sigma), c1, c2, std::move(comp), x_ref, x_far};
}

struct VerifyReport {
  std::vector<double> xs;
  // values relative to e^log_scale
  std::vector<double> u_approx, u_ref, abs_err, rel_err;
  double log_scale = 0.0;
  double max_rel_err = 0.0;
};

// Compares the assembled u with oracle integrations started from the
// approximation's own data: the recessive part from x_ref and the dominant
// part from x_far, so that each is integrated in its stable direction.
// rel_err uses the envelope sqrt(u^2 + l^2 u'^2) of the reference,
// l = sqrt(eps / max|omega^2|), so zeros of oscillatory solutions do not
// blow it up.
inline VerifyReport verify(const UniformSolution& s, const GridFunction& omega2, std::size_t points = 401,
                           double rtol = 1e-12) {
  const Interval& iv = omega2.interval();
  struct Part {
    OdeSolution sol;
    double base;
  };
  std::vector<Part> parts;
  auto add = [&](double x0, double w1, double w2) {
    const ScaledValue u0 = s.u(x0, w1, w2);
    const ScaledValue du0 = s.du(x0, w1, w2);
    const double base = std::max(u0.log_abs(), du0.log_abs());
    parts.push_back({integrate_linear(omega2, s.eps, x0, u0.relative_to(base), du0.relative_to(base), iv, rtol), base});
  };
  if (s.c2 != 0.0) add(s.x_ref, 0.0, s.c2);
  if (s.c1 != 0.0) add(s.x_far, s.c1, 0.0);
  if (parts.empty()) throw ConfigError("verify needs a nonzero branch weight");

  const double ell = std::sqrt(s.eps / std::max(omega2.max_abs(), 1e-300));
  VerifyReport r;
  std::vector<ScaledValue> ua, ur;
  double top = -INFINITY;
  for (double x : probe_points(iv, points)) {
    const ScaledValue a = s.u(x);
    ScaledValue b, db;
    for (const Part& p : parts) {
      b = b + ScaledValue::exp_times(1.0, p.base) * p.sol.value(x);
      db = db + ScaledValue::exp_times(1.0, p.base) * p.sol.derivative(x);
    }
    const double env_log = std::max(b.log_abs(), db.log_abs() + std::log(ell));
    const double env = std::hypot(b.relative_to(env_log), ell * db.relative_to(env_log));
    r.xs.push_back(x);
    r.rel_err.push_back(std::abs((a - b).relative_to(env_log)) / env);
    r.max_rel_err = std::max(r.max_rel_err, r.rel_err.back());
    ua.push_back(a);
    ur.push_back(b);
    top = std::max(top, b.log_abs());
  }
  // Values are written relative to e^log_scale only when plain doubles would overflow.
  r.log_scale = std::abs(top) > 700.0 ? top : 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    r.u_approx.push_back(ua[i].relative_to(r.log_scale));
    r.u_ref.push_back(ur[i].relative_to(r.log_scale));
    r.abs_err.push_back(std::abs((ua[i] - ur[i]).relative_to(r.log_scale)));
  }
  return r;
}

struct InvariantReport {
  double alpha;
  std::vector<std::pair<double, double>> samples;
  double max_rel_drift;
};

// I = (1/2) [alpha (u/rho)^2 + (u rho' - rho u')^2] sampled over xs.
inline InvariantReport ermakov_invariant(const std::function<double(double)>& u,
                                         const std::function<double(double)>& du,
                                         const std::function<double(double)>& rho,
                                         const std::function<double(double)>& drho, double alpha,
                                         const std::vector<double>& xs) {
  InvariantReport r{alpha, {}, 0.0};
  for (double x : xs) {
    const double p = rho(x);
    if (p == 0.0) throw DomainError("rho vanishes in the Ermakov invariant");
    const double q = u(x) / p;
    const double w = u(x) * drho(x) - p * du(x);
    r.samples.emplace_back(x, 0.5 * (alpha * q * q + w * w));
  }
  if (r.samples.empty()) throw DomainError("Ermakov invariant needs sample points");
  const double i0 = r.samples.front().second;
  for (const auto& [x, v] : r.samples) r.max_rel_drift = std::max(r.max_rel_drift, std::abs(v - i0) / std::abs(i0));
  return r;
}

inline InvariantReport ermakov_invariant(const GridFunction& u, const GridFunction& rho, double alpha,
                                         std::size_t points = 1000) {
  const GridFunction du = deriv(u), dr = deriv(rho);
  return ermakov_invariant([&](double x) { return u(x); }, [&](double x) { return du(x); },
                           [&](double x) { return rho(x); }, [&](double x) { return dr(x); }, alpha,
                           probe_points(u.interval(), points));
}

inline InvariantReport ermakov_invariant(const OdeSolution& u, const OdeSolution& rho, double alpha,
                                         std::size_t points = 1000) {
  return ermakov_invariant([&](double x) { return u(x); }, [&](double x) { return u.deriv(x); },
                           [&](double x) { return rho(x); }, [&](double x) { return rho.deriv(x); }, alpha,
                           probe_points(u.span(), points));
}

}  // namespace uniwkb
