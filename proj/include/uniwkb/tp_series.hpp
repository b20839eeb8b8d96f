#pragma once

// Exact turning-point expansions for the Langer kind.
//
// Near a simple zero at x = 0,
//   omega^2 = g1 x + g2 x^2/2! + g3 x^3/3! + g4 x^4/4! + ...,
//   sigma   = s0 + s1 x + s2 x^2/2! + s3 x^3/3! + s4 x^4/4! + ...
// Coefficients are polynomials in g1^{p} (p rational), g2, g3, g4 with exact
// rational coefficients, so identities between routes are checked exactly.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "uniwkb/errors.hpp"
#include "uniwkb/series.hpp"
#include "uniwkb/turning_point.hpp"

namespace uniwkb {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline BigInt integer_root(const BigInt& v, unsigned n) {
  if (v < 0) throw DomainError("root of a negative rational");
  if (v == 0 || n == 1) return v;
  BigInt r(static_cast<long long>(std::llround(std::pow(static_cast<double>(v), 1.0 / n))));
  for (const BigInt& c : {BigInt(r - 1), r, BigInt(r + 1)}) {
    if (c >= 0 && boost::multiprecision::pow(c, n) == v) return c;
  }
  throw DomainError("rational power is not exact");
}

inline Rational int_pow(const Rational& c, long k) {
  Rational r = 1;
  const Rational b = k >= 0 ? c : Rational(1) / c;
  for (long i = 0; i < std::abs(k); ++i) r *= b;
  return r;
}

// c^e for rational c > 0 and rational e, when the result is rational.
inline Rational rational_power(const Rational& c, const Rational& e) {
  if (c == 1) return 1;
  const BigInt p = boost::multiprecision::numerator(e);
  const BigInt q = boost::multiprecision::denominator(e);
  if (q == 1) return int_pow(c, static_cast<long>(p));
  if (c < 0) throw DomainError("fractional power of a negative rational");
  const unsigned qn = static_cast<unsigned>(q);
  const Rational root(integer_root(boost::multiprecision::numerator(c), qn),
                      integer_root(boost::multiprecision::denominator(c), qn));
  return int_pow(root, static_cast<long>(p));
}

}  // namespace detail

// coeff * g1^p1 * g2^e2 * g3^e3 * g4^e4
struct GammaMonomial {
  Rational coeff;
  Rational p1;
  int e2 = 0, e3 = 0, e4 = 0;

  // Power of g1^{1/3}; throws when p1 is not a multiple of 1/3.
  long p3() const {
    const Rational t = 3 * p1;
    if (boost::multiprecision::denominator(t) != 1) throw DomainError("g1 power is not a multiple of 1/3");
    return static_cast<long>(boost::multiprecision::numerator(t));
  }
};

// Finite sum of GammaMonomials in canonical form (no zero coefficients).
class GammaPoly {
 public:
  using Key = std::tuple<Rational, int, int, int>;

  GammaPoly() = default;
  GammaPoly(const Rational& c) {  // NOLINT: rationals embed as constants
    if (c != 0) terms_[Key{Rational(0), 0, 0, 0}] = c;
  }
  static GammaPoly monomial(const Rational& c, const Rational& p1, int e2 = 0, int e3 = 0, int e4 = 0) {
    GammaPoly r;
    if (c != 0) r.terms_[Key{p1, e2, e3, e4}] = c;
    return r;
  }
  // g_k as a symbol, k in 1..4.
  static GammaPoly gamma(int k) {
    switch (k) {
      case 1: return monomial(1, 1);
      case 2: return monomial(1, 0, 1);
      case 3: return monomial(1, 0, 0, 1);
      case 4: return monomial(1, 0, 0, 0, 1);
    }
    throw DomainError("gamma index must be 1..4");
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::vector<GammaMonomial> monomials() const {
    std::vector<GammaMonomial> out;
    for (const auto& [k, c] : terms_) out.push_back({c, std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k)});
    return out;
  }

  // Coefficient of g1^p1 g2^e2 g3^e3 g4^e4 (zero when absent).
  Rational coefficient(const Rational& p1, int e2 = 0, int e3 = 0, int e4 = 0) const {
    const auto it = terms_.find(Key{p1, e2, e3, e4});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend GammaPoly operator+(const GammaPoly& a, const GammaPoly& b) {
    GammaPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add(k, c);
    return r;
  }
  GammaPoly operator-() const {
    GammaPoly r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
  }
  friend GammaPoly operator-(const GammaPoly& a, const GammaPoly& b) { return a + (-b); }
  friend GammaPoly operator*(const GammaPoly& a, const GammaPoly& b) {
    GammaPoly r;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        r.add(Key{std::get<0>(ka) + std::get<0>(kb), std::get<1>(ka) + std::get<1>(kb),
                  std::get<2>(ka) + std::get<2>(kb), std::get<3>(ka) + std::get<3>(kb)},
              ca * cb);
      }
    }
    return r;
  }
  friend GammaPoly operator*(const GammaPoly& a, const Rational& s) { return a * GammaPoly(s); }
  friend GammaPoly operator*(const Rational& s, const GammaPoly& a) { return a * GammaPoly(s); }
  friend bool operator==(const GammaPoly& a, const GammaPoly& b) { return a.terms_ == b.terms_; }

  // Single monomial raised to a rational power.
  GammaPoly pow_monomial(const Rational& r) const {
    if (terms_.size() != 1) throw DomainError("rational power needs a single leading monomial");
    const auto& [k, c] = *terms_.begin();
    const bool integral = boost::multiprecision::denominator(r) == 1;
    if (!integral && (std::get<1>(k) != 0 || std::get<2>(k) != 0 || std::get<3>(k) != 0)) {
      throw DomainError("fractional power of a monomial in g2, g3, g4");
    }
    if (!integral && c <= 0) throw DomainError("fractional power of a nonpositive coefficient");
    const Rational pr = r;
    auto scaled = [&](int e) {
      const Rational v = pr * e;
      return static_cast<int>(boost::multiprecision::numerator(v));
    };
    return monomial(detail::rational_power(c, r), std::get<0>(k) * r, scaled(std::get<1>(k)), scaled(std::get<2>(k)),
                    scaled(std::get<3>(k)));
  }

  // Numerical value at given gammas.
  double evaluate(const std::array<double, 4>& g) const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) {
      s += static_cast<double>(c) * std::pow(g[0], static_cast<double>(std::get<0>(k))) *
           std::pow(g[1], std::get<1>(k)) * std::pow(g[2], std::get<2>(k)) * std::pow(g[3], std::get<3>(k));
    }
    return s;
  }

  // Exact value at rational gammas; requires g1^p rational for every power
  // that survives (terms with a vanishing g2..g4 factor are skipped).
  Rational value(const std::array<Rational, 4>& g) const {
    Rational s = 0;
    for (const auto& [k, c] : terms_) {
      if ((std::get<1>(k) > 0 && g[1] == 0) || (std::get<2>(k) > 0 && g[2] == 0) || (std::get<3>(k) > 0 && g[3] == 0)) {
        continue;
      }
      s += c * detail::rational_power(g[0], std::get<0>(k)) * detail::int_pow(g[1], std::get<1>(k)) *
           detail::int_pow(g[2], std::get<2>(k)) * detail::int_pow(g[3], std::get<3>(k));
    }
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      Rational a = c;
      if (first) {
        if (a < 0) os << "-";
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      if (a < 0) a = -a;
      os << a;
      const Rational& p = std::get<0>(k);
      if (p != 0) {
        os << " g1";
        if (p != 1) os << "^(" << p << ")";
      }
      const int e[3] = {std::get<1>(k), std::get<2>(k), std::get<3>(k)};
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        os << " g" << (i + 2);
        if (e[i] != 1) os << "^" << e[i];
      }
      first = false;
    }
    return os.str();
  }

 private:
  void add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Key, Rational> terms_;
};

template <>
struct ring_traits<GammaPoly> {
  using scalar = Rational;
  static GammaPoly zero_like(const GammaPoly&) { return GammaPoly(); }
  static GammaPoly one_like(const GammaPoly&) { return GammaPoly(Rational(1)); }
  static GammaPoly scale(const GammaPoly& a, const Rational& s) { return a * s; }
  static GammaPoly pow_leading(const GammaPoly& a, const Rational& r) { return a.pow_monomial(r); }
  static GammaPoly inverse(const GammaPoly& a) { return a.pow_monomial(Rational(-1)); }
  static Rational from_int(long v) { return Rational(v); }
};

// Series in x with GammaPoly coefficients (coefficient k multiplies x^k).
using GammaSeries = TruncatedSeries<GammaPoly>;

inline GammaSeries x_derivative(const GammaSeries& s) {
  std::vector<GammaPoly> c;
  for (std::size_t k = 1; k <= s.order(); ++k) c.push_back(s[k] * Rational(static_cast<long>(k)));
  if (c.empty()) c.emplace_back();
  return GammaSeries(std::move(c));
}

inline Rational factorial(std::size_t k) {
  Rational f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long>(i);
  return f;
}

// Symbolic gammas: coefficient k of omega^2 / x is g_{k+1} / (k+1)!.
inline GammaSeries symbolic_q(std::size_t order) {
  if (order > 3) throw DomainError("symbolic omega^2 carries g1..g4 only");
  std::vector<GammaPoly> c;
  for (std::size_t k = 0; k <= order; ++k) {
    c.push_back(GammaPoly::gamma(static_cast<int>(k + 1)) * (Rational(1) / factorial(k + 1)));
  }
  return GammaSeries(std::move(c));
}

// Result of the turning-point analysis to depth x^4, eps^1.
struct DingleCoefficients {
  // sigma_0 .. sigma_4 at lowest order, as derivatives (sigma_k = k! [x^k] sigma)
  std::vector<GammaPoly> sigma;
  // y0 series about the turning point (coefficient k multiplies x^k)
  GammaSeries y0;
  // leading constant of y1
  GammaPoly y1_at_tp;
  // eps-coefficients of sigma_0 and sigma_1
  GammaPoly sigma0_eps;
  GammaPoly sigma1_eps;
};

// sigma_0..sigma_4 from dsigma/dx = 1/y0^2 with y0 the Langer prefactor series.
inline std::vector<GammaPoly> sigma_lowest(const GammaSeries& q) {
  if (q[0].is_zero()) throw TurningPointError("not a simple turning point (g1 = 0)");
  const GammaSeries y0 = langer_prefactor_series(q);
  const GammaSeries ds = rpow(y0, Rational(-2));
  std::vector<GammaPoly> s{GammaPoly()};
  for (std::size_t k = 1; k <= ds.order() + 1; ++k) s.push_back(ds[k - 1] * factorial(k - 1));
  return s;
}

inline std::vector<GammaPoly> sigma_lowest(std::size_t order = 4) { return sigma_lowest(symbolic_q(order - 1)); }

// y0 from the sigma coefficients, y0 = (dsigma/dx)^{-1/2}.
inline GammaSeries y0_from_sigma(const std::vector<GammaPoly>& s) {
  std::vector<GammaPoly> ds;
  for (std::size_t k = 1; k < s.size(); ++k) {
    ds.push_back(s[k] * (Rational(1) / factorial(k - 1)));
  }
  return rpow(GammaSeries(std::move(ds)), Rational(-1, 2));
}

// Constant term of y1: at x = 0 the order-1 equation reduces to
// 6 g1 y0^5 y1 = 3 y0'' y0' y0^4 + y0''' y0^5.
inline GammaPoly y1_leading(const GammaSeries& y0, const GammaPoly& g1) {
  if (y0.order() < 3) throw StructuralError("y1 leading term needs y0 through x^3");
  const GammaPoly& a = y0[0];
  const GammaPoly d1 = y0[1];
  const GammaPoly d2 = y0[2] * Rational(2);
  const GammaPoly d3 = y0[3] * Rational(6);
  const GammaPoly a4 = a * a * a * a;
  const GammaPoly f1 = Rational(3) * d2 * d1 * a4 + d3 * a4 * a;
  return f1 * (a4 * a * g1 * Rational(6)).pow_monomial(-1);
}

// Printed closed form of the y1 leading term in terms of sigma_1..sigma_4.
inline GammaPoly y1_leading_printed(const std::vector<GammaPoly>& s, const GammaPoly& g1) {
  const GammaPoly& s1 = s[1];
  auto p = [&](const Rational& r) { return s1.pow_monomial(r); };
  const GammaPoly inner = Rational(-1, 2) * s[2] * s[2] * s[2] * p(Rational(-7, 2)) +
                          Rational(1, 2) * s[3] * s[2] * p(Rational(-5, 2)) - Rational(1, 12) * s[4] * p(Rational(-3, 2));
  return inner * g1.pow_monomial(-1);
}

// Printed bracket coefficients of the y0 expansion in terms of sigma_i:
// y0 = s1^{-1/2} [1 + c1 x + c2 x^2 + c3 x^3].
inline std::vector<GammaPoly> y0_from_sigma_printed(const std::vector<GammaPoly>& s) {
  const GammaPoly i1 = s[1].pow_monomial(-1);
  const GammaPoly c1 = Rational(-1, 2) * s[2] * i1;
  const GammaPoly c2 = Rational(3, 8) * s[2] * s[2] * i1 * i1 - Rational(1, 4) * s[3] * i1;
  const GammaPoly c3 = Rational(3, 8) * s[2] * s[3] * i1 * i1 - Rational(1, 12) * s[4] * i1 -
                       Rational(5, 16) * s[2] * s[2] * s[2] * i1 * i1 * i1;
  const GammaPoly lead = s[1].pow_monomial(Rational(-1, 2));
  return {lead, lead * c1, lead * c2, lead * c3};
}

// eps-coefficient of sigma_0: from sigma = omega^2 y^4 - eps y'' y^3 at x = 0.
inline GammaPoly sigma0_correction(const GammaSeries& y0) {
  const GammaPoly& a = y0[0];
  return -(y0[2] * Rational(2)) * a * a * a;
}

// eps-coefficient of sigma_1: from dsigma/dx = (y0 + eps y1)^{-2} at x = 0.
inline GammaPoly sigma1_correction(const GammaPoly& y0_at_tp, const GammaPoly& y1_at_tp) {
  return Rational(-2) * y1_at_tp * (y0_at_tp * y0_at_tp * y0_at_tp).pow_monomial(-1);
}

// Printed closed forms of the eps-corrections.
inline GammaPoly sigma0_correction_printed() {
  return GammaPoly::monomial(Rational(1, 14), Rational(-5, 3), 0, 1) +
         GammaPoly::monomial(Rational(-9, 140), Rational(-8, 3), 2);
}
inline GammaPoly sigma1_correction_printed() {
  return GammaPoly::monomial(Rational(7, 225), Rational(-11, 3), 3) +
         GammaPoly::monomial(Rational(-7, 135), Rational(-8, 3), 1, 1) +
         GammaPoly::monomial(Rational(1, 54), Rational(-5, 3), 0, 0, 1);
}

// Printed closed forms of sigma_0..sigma_4 at lowest order.
inline std::vector<GammaPoly> sigma_lowest_printed() {
  using M = GammaPoly;
  return {M(),
          M::monomial(1, Rational(1, 3)),
          M::monomial(Rational(1, 5), Rational(-2, 3), 1),
          M::monomial(Rational(1, 7), Rational(-2, 3), 0, 1) + M::monomial(Rational(-12, 175), Rational(-5, 3), 2),
          M::monomial(Rational(1, 9), Rational(-2, 3), 0, 0, 1) +
              M::monomial(Rational(-44, 315), Rational(-5, 3), 1, 1) +
              M::monomial(Rational(148, 2625), Rational(-8, 3), 3)};
}

// Full chain to depth x^4, eps^1: sigma_k from the Langer prefactor, y0 from
// the sigma_k, y1 leading term from the order-1 equation, then the eps
// corrections of sigma_0 and sigma_1.
inline DingleCoefficients dingle_coefficients() {
  std::vector<GammaPoly> sigma = sigma_lowest(symbolic_q(3));
  GammaSeries y0 = y0_from_sigma(sigma);
  GammaPoly y1 = y1_leading(y0, GammaPoly::gamma(1));
  GammaPoly s0 = sigma0_correction(y0);
  GammaPoly s1 = sigma1_correction(y0[0], y1);
  return {std::move(sigma), std::move(y0), std::move(y1), std::move(s0), std::move(s1)};
}

}  // namespace uniwkb
