#include <cmath>

#include <gtest/gtest.h>

#include "uniwkb/eps_series.hpp"

using namespace uniwkb;

namespace {

const Interval kUnit(0, 1);

GridFunction F(auto&& f) { return fit(f, kUnit, 1e-14); }

double sup(const GridFunction& g) { return g.max_abs(); }

}  // namespace

TEST(TruncatedSeries, RationalPowerRoundTrip) {
  const TruncatedSeries<double> a({2.0, 0.3, -0.7, 1.1, 0.05});
  const auto b = rpow(rpow(a, 1.0 / 3.0), 3.0);
  for (std::size_t k = 0; k <= a.order(); ++k) EXPECT_NEAR(b[k], a[k], 1e-14);
}

TEST(TruncatedSeries, ShiftActsAsEps) {
  const TruncatedSeries<double> a({1.0, 2.0, 3.0});
  const auto s = a.shifted(1);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[2], 2.0);
}

TEST(EpsSeries, IdentityProduct) {
  const auto one = GridFunction::constant(kUnit, 1.0);
  const auto zero = GridFunction::constant(kUnit, 0.0);
  const auto a = make_eps_series({one, zero});
  const auto p = mul(a, a, 1);
  EXPECT_EQ(sup(p[0] - one), 0.0);
  EXPECT_EQ(sup(p[1]), 0.0);
}

TEST(EpsSeries, Binomial) {
  const auto x = GridFunction::identity(kUnit);
  const auto one = GridFunction::constant(kUnit, 1.0);
  const auto a = make_eps_series({x, one});
  const auto p = mul(a, a, 1);
  EXPECT_LT(sup(p[0] - x * x), 1e-15);
  EXPECT_LT(sup(p[1] - 2.0 * x), 1e-15);
}

TEST(EpsSeries, FourthPowerFirstOrder) {
  const auto y0 = F([](double x) { return std::pow(1 + x * x, -0.25); });
  const auto y1 = F([](double x) { return std::sin(x); });
  const auto a = make_eps_series({y0, y1});
  const auto sq = mul(a, a, 1);
  const auto p4 = mul(sq, sq, 1);
  const auto expect = F([](double x) { return 4 * std::pow(1 + x * x, -0.75) * std::sin(x); });
  EXPECT_LT(max_abs_diff(p4[1], expect), 1e-13);
}

TEST(EpsSeries, IntPower) {
  const auto two = GridFunction::constant(kUnit, 2.0);
  const auto zero = GridFunction::constant(kUnit, 0.0);
  const auto one = GridFunction::constant(kUnit, 1.0);
  const auto c = int_power(make_eps_series({two, zero}), 3, 1);
  EXPECT_NEAR(c[0](0.3), 8.0, 1e-15);
  EXPECT_NEAR(c[1](0.3), 0.0, 1e-15);
  const auto d = int_power(make_eps_series({one, one}), 4, 1);
  EXPECT_NEAR(d[1](0.7), 4.0, 1e-14);

  const auto y0 = F([](double x) { return 1 + x; });
  const auto y1 = F([](double x) { return std::cos(x); });
  const auto e = int_power(make_eps_series({y0, y1}), 6, 1);
  const auto expect = F([](double x) { return 6 * std::pow(1 + x, 5) * std::cos(x); });
  EXPECT_LT(max_abs_diff(e[1], expect), 1e-12);
}

TEST(EpsSeries, OrderBeyondAvailableIsStructural) {
  const auto one = GridFunction::constant(kUnit, 1.0);
  const auto a = make_eps_series({one});
  EXPECT_THROW(mul(a, a, 1), StructuralError);
}

TEST(EpsSeries, MixedIntervalsAreStructural) {
  EXPECT_THROW(make_eps_series({GridFunction::constant(kUnit, 1.0), GridFunction::constant(Interval(0, 2), 1.0)}),
               StructuralError);
}

TEST(EpsSeries, CommutativeAndAssociative) {
  const auto a = make_eps_series({F([](double x) { return std::exp(x); }), F([](double x) { return x * x; })});
  const auto b = make_eps_series({F([](double x) { return std::cos(x); }), F([](double x) { return 1 - x; })});
  const auto c = make_eps_series({F([](double x) { return 1 / (2 + x); }), F([](double x) { return std::sin(2 * x); })});
  const auto ab = mul(a, b, 1), ba = mul(b, a, 1);
  const auto l = mul(ab, c, 1), r = mul(a, mul(b, c, 1), 1);
  for (std::size_t n = 0; n <= 1; ++n) {
    EXPECT_LT(max_abs_diff(ab[n], ba[n]), 1e-12);
    EXPECT_LT(max_abs_diff(l[n], r[n]), 1e-12);
  }
}

TEST(EpsSeries, Leibniz) {
  const auto a = make_eps_series({F([](double x) { return std::exp(x); }), F([](double x) { return x * x * x; })});
  const auto b = make_eps_series({F([](double x) { return std::cos(x); }), F([](double x) { return 1 / (1 + x); })});
  const auto ab = mul(a, b, 1);
  const auto da = make_eps_series({deriv(a[0]), deriv(a[1])});
  const auto db = make_eps_series({deriv(b[0]), deriv(b[1])});
  const auto rhs1 = mul(da, b, 1), rhs2 = mul(a, db, 1);
  for (std::size_t n = 0; n <= 1; ++n) EXPECT_LT(max_abs_diff(deriv(ab[n]), rhs1[n] + rhs2[n]), 1e-11);
}

TEST(OrderExtract, PinneyLeadingOrderVanishes) {
  const auto w = F([](double x) { return 1 + x * x; });
  const auto y0 = F([](double x) { return std::pow(1 + x * x, -0.25); });
  const auto r = order_extract(Kind::constant, make_eps_series({y0}), w, 0);
  EXPECT_LT(sup(r), 1e-13);
}

TEST(OrderExtract, LangerExactCase) {
  const auto w = GridFunction::identity(kUnit);
  const auto r = order_extract(Kind::linear, make_eps_series({GridFunction::constant(kUnit, 1.0)}), w, 0);
  EXPECT_LT(sup(r), 1e-15);
}

TEST(OrderExtract, PinneyFirstOrderIsMinusYddY3) {
  const auto w = F([](double x) { return 1 + x * x; });
  const auto y0 = F([](double x) { return std::pow(1 + x * x, -0.25); });
  const auto zero = GridFunction::constant(kUnit, 0.0);
  const auto r = order_extract(Kind::constant, make_eps_series({y0, zero}), w, 1);
  const auto expect = -1.0 * (deriv(y0, 2) * y0 * y0 * y0);
  EXPECT_LT(max_abs_diff(r, expect), 1e-12);
}

TEST(Linearization, MatchesFiniteDifferences) {
  const PointData p{1.7, 0.4, 0.9};
  const Jet<double> y{0.8, -0.3, 0.2, 0.1};
  for (Kind k : {Kind::constant, Kind::linear, Kind::exp, Kind::quadratic}) {
    const auto [f, g] = linearization(k, y, p);
    const double h = 1e-6;
    auto P0 = [&](const Jet<double>& j) { return equation_parts(k, j, p).p0; };
    const double fd_f = (P0({y.y, y.d1 + h, y.d2, y.d3}) - P0({y.y, y.d1 - h, y.d2, y.d3})) / (2 * h);
    const double fd_g = (P0({y.y + h, y.d1, y.d2, y.d3}) - P0({y.y - h, y.d1, y.d2, y.d3})) / (2 * h);
    EXPECT_NEAR(f, fd_f, 1e-7 * std::max(1.0, std::abs(f))) << to_string(k);
    EXPECT_NEAR(g, fd_g, 1e-7 * std::max(1.0, std::abs(g))) << to_string(k);
  }
}

TEST(Kind, ParseRejectsUnknown) {
  EXPECT_EQ(parse_kind("exp"), Kind::exp);
  EXPECT_THROW(parse_kind("cubic"), ConfigError);
}
