#pragma once

// Defining equations of the prefactor y = (dsigma/dx)^(-1/2) for the four
// comparison functions Omega^2(sigma) in {1, sigma, e^sigma - 1, sigma^2 - a^2}.
//
// Each equation is written as P0 + eps P1 + eps^2 P2 = 0 with the P's
// polynomial in the jet (y, y', y'', y''') and in omega^2, (omega^2)'. The
// templates accept T = double (a summed series at fixed eps) and
// T = TruncatedSeries<double> (the eps expansion itself, where eps acts as a
// shift), so the order-n recurrence is read off mechanically.

#include <cmath>
#include <string>
#include <string_view>

#include "uniwkb/errors.hpp"
#include "uniwkb/series.hpp"

namespace uniwkb {

enum class Kind { constant, linear, exp, quadratic };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::constant: return "constant";
    case Kind::linear: return "linear";
    case Kind::exp: return "exp";
    case Kind::quadratic: return "quadratic";
  }
  return "unknown";
}

inline Kind parse_kind(std::string_view s) {
  if (s == "constant" || s == "pinney") return Kind::constant;
  if (s == "linear" || s == "langer") return Kind::linear;
  if (s == "exp") return Kind::exp;
  if (s == "quadratic") return Kind::quadratic;
  throw ConfigError("unknown comparison kind '" + std::string(s) +
                    "' (expected constant, linear, exp or quadratic)");
}

inline bool has_turning_point(Kind k) { return k != Kind::constant; }

template <class T>
struct Jet {
  T y, d1, d2, d3;
};

template <class T>
struct EquationParts {
  T p0, p1, p2;
};

// omega^2 and its derivative at the evaluation point; a2 only for the
// quadratic kind.
struct PointData {
  double w;
  double wd;
  double a2 = 0.0;
};

// Sign of the eps terms in the quadratic kind. The solver uses `corrected`;
// `printed` reproduces a sign convention kept only for audits.
enum class QuadSign { corrected, printed };

template <class T>
EquationParts<T> equation_parts(Kind kind, const Jet<T>& j, const PointData& p,
                                QuadSign sign = QuadSign::corrected) {
  const T& y = j.y;
  const T zero = y * 0.0;
  const T y2 = y * y;
  const T y3 = y2 * y;
  const T y4 = y3 * y;
  const T y5 = y4 * y;
  const T y6 = y5 * y;
  switch (kind) {
    case Kind::constant:
      return {p.w * y4 - 1.0, -(y3 * j.d2), zero};
    case Kind::linear:
      return {p.wd * y6 + 4.0 * p.w * (j.d1 * y5) - 1.0, -(3.0 * (j.d2 * j.d1 * y4) + j.d3 * y5), zero};
    case Kind::exp:
      return {p.w * y4 - p.wd * y6 - 4.0 * p.w * (j.d1 * y5) + 1.0,
              -(j.d2 * y3 - 3.0 * (j.d2 * j.d1 * y4) - j.d3 * y5), zero};
    case Kind::quadratic: {
      const T A = p.wd * y6 + 4.0 * p.w * (j.d1 * y5);
      const T B = 3.0 * (j.d2 * j.d1 * y4) + j.d3 * y5;
      T p1 = -2.0 * (A * B) + 4.0 * (j.d2 * y3);
      if (sign == QuadSign::printed) p1 = -p1;
      return {A * A - 4.0 * p.w * y4 - 4.0 * p.a2, p1, B * B};
    }
  }
  throw ConfigError("unknown comparison kind");
}

// Full residual at a fixed eps.
inline double equation_residual(Kind kind, const Jet<double>& j, const PointData& p, double eps,
                                QuadSign sign = QuadSign::corrected) {
  const auto e = equation_parts(kind, j, p, sign);
  return e.p0 + eps * (e.p1 + eps * e.p2);
}

// Residual of the unsquared quadratic-kind relation
// 2 sigma = A - eps B with sigma = s sqrt(omega^2 y^4 + a^2 - eps y'' y^3),
// s = +1 on the right outer region. Used to reject the branch introduced by
// squaring.
inline double quadratic_unsquared_residual(const Jet<double>& j, const PointData& p, double eps, double s) {
  const double y = j.y;
  const double A = p.wd * std::pow(y, 6) + 4.0 * p.w * j.d1 * std::pow(y, 5);
  const double B = 3.0 * j.d2 * j.d1 * std::pow(y, 4) + j.d3 * std::pow(y, 5);
  const double rad = p.w * std::pow(y, 4) + p.a2 - eps * j.d2 * std::pow(y, 3);
  return s * 2.0 * std::sqrt(std::max(rad, 0.0)) - (A - eps * B);
}

// Order-eps^n coefficient of P0 + eps P1 + eps^2 P2 along a jet expansion.
inline double order_coefficient(Kind kind, const Jet<TruncatedSeries<double>>& j, const PointData& p,
                                std::size_t n, QuadSign sign = QuadSign::corrected) {
  const auto e = equation_parts(kind, j, p, sign);
  TruncatedSeries<double> r = e.p0;
  if (n >= 1) r = r + e.p1.shifted(1);
  if (n >= 2) r = r + e.p2.shifted(2);
  return r[n];
}

// Coefficients of the linearization f y_n' + g y_n of P0 about y0.
inline std::pair<double, double> linearization(Kind kind, const Jet<double>& y0, const PointData& p) {
  auto make = [&](double dy, double dd1) {
    Jet<TruncatedSeries<double>> j{TruncatedSeries<double>({y0.y, dy}), TruncatedSeries<double>({y0.d1, dd1}),
                                   TruncatedSeries<double>({y0.d2, 0.0}), TruncatedSeries<double>({y0.d3, 0.0})};
    return equation_parts(kind, j, p).p0[1];
  };
  return {make(0.0, 1.0), make(1.0, 0.0)};
}

}  // namespace uniwkb
