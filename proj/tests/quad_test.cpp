#include <cmath>
#include <iostream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "uniwkb/quad_two_tp.hpp"

using namespace uniwkb;
using uniwkb::testing::max_err;

namespace {

GridFunction omega2(auto&& f) { return fit(f, Interval(-2, 2), 1e-15); }

GridFunction quartic() { return omega2([](double x) { return x * x - 1 + x * x * x * x / 10; }); }

}  // namespace

TEST(QuadBarrier, Zeros) {
  const auto z = barrier_zeros(quartic());
  EXPECT_NEAR(z.plus, std::sqrt(std::sqrt(35.0) - 5.0), 1e-13);
  EXPECT_NEAR(z.minus, -z.plus, 1e-13);
  EXPECT_THROW(barrier_zeros(omega2([](double x) { return x; })), TurningPointError);
  EXPECT_THROW(barrier_zeros(omega2([](double x) { return 1 + x * x; })), TurningPointError);
}

TEST(QuadBarrier, Parameter) {
  const auto w1 = omega2([](double x) { return x * x - 1; });
  EXPECT_NEAR(barrier_parameter(w1, -1, 1), 1.0, 1e-12);
  const auto w4 = omega2([](double x) { return 4 * (x * x - 1); });
  const double a = barrier_parameter(w4, -1, 1);
  EXPECT_NEAR(a * a, 2.0, 1e-12);
  const auto w0 = omega2([](double x) { return x * x - 1 + 0 * x * x * x * x; });
  EXPECT_NEAR(barrier_parameter(w0, -1, 1), 1.0, 1e-12);
}

TEST(QuadLeading, SelfComparisonIsExact) {
  for (Side side : {Side::right, Side::left}) {
    const auto e = quad_expand(omega2([](double x) { return x * x - 1; }), 1e-2, 3, side);
    EXPECT_NEAR(e.a, 1.0, 1e-12);
    EXPECT_LT(max_err(e.ys[0], [](double) { return 1.0; }), 1e-12);
    for (std::size_t n = 1; n <= 3; ++n) EXPECT_LT(e.ys[n].max_abs(), 1e-10) << "order " << n;
  }
}

TEST(QuadLeading, ScaledBarrier) {
  const auto e = quad_expand(omega2([](double x) { return 4 * (x * x - 1); }), 1e-2, 1);
  EXPECT_LT(e.order_residuals[0], 1e-9);
  EXPECT_NEAR(e.omega2.interval().lo(), 1.0, 1e-12);
  // y0(x_tp) = (2a / g1)^{1/6} with g1 = 8, a = sqrt(2)
  EXPECT_NEAR(e.ys[0](1.0), std::pow(2 * std::sqrt(2.0) / 8, 1.0 / 6), 1e-10);
  for (double x : probe_points(e.omega2.interval(), 200)) EXPECT_TRUE(std::isfinite(e.ys[0](x)));
}

TEST(QuadLeading, SidesMirrorForEvenPotential) {
  const auto r = quad_expand(quartic(), 1e-2, 2, Side::right);
  const auto l = quad_expand(quartic(), 1e-2, 2, Side::left);
  for (std::size_t n = 0; n <= 2; ++n) {
    EXPECT_LT(max_err(l.ys[n], [&](double x) { return r.ys[n](-x); }), 1e-8) << "order " << n;
  }
}

TEST(QuadNext, OrdersSolvedAndBranchChecked) {
  const auto e = quad_expand(quartic(), 1e-2, 3);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_LT(quad_linear_residual(e, n), 1e-9) << "order " << n;
  const JetFunctions j(sum_at(e.ys, 1e-2));
  const GridFunction wd = deriv(e.omega2);
  double m = 0.0;
  for (double x : probe_points(Interval(1.2, 2), 200)) {
    m = std::max(m, std::abs(quadratic_unsquared_residual(j.at(x), {e.omega2(x), wd(x), e.a * e.a}, 1e-2, 1.0)));
  }
  EXPECT_LT(m, 1e-6);
}

TEST(QuadNext, LinearizationMatchesFiniteDifferences) {
  const auto e = quad_expand(quartic(), 1e-2, 0);
  const JetFunctions j(e.ys[0]);
  const GridFunction wd = deriv(e.omega2);
  for (double x : {1.3, 1.6, 1.9}) {
    const Jet<double> y = j.at(x);
    const PointData p{e.omega2(x), wd(x), e.a * e.a};
    const auto [f, g] = linearization(Kind::quadratic, y, p);
    const double h = 1e-6;
    auto res = [&](double dy, double dd1) {
      Jet<double> t = y;
      t.y += dy;
      t.d1 += dd1;
      return equation_residual(Kind::quadratic, t, p, 0.0);
    };
    const double fd_f = (res(0, h) - res(0, -h)) / (2 * h);
    const double fd_g = (res(h, 0) - res(-h, 0)) / (2 * h);
    EXPECT_NEAR(f, fd_f, 1e-7 * std::abs(f)) << "x = " << x;
    EXPECT_NEAR(g, fd_g, 1e-7 * std::abs(g)) << "x = " << x;
  }
}

TEST(QuadResidual, ScalesAsEpsToTheNPlusOne) {
  const auto e = quad_expand(quartic(), 1e-2, 2);
  for (std::size_t N = 0; N <= 2; ++N) {
    EXPECT_NEAR(uniwkb::testing::residual_slope(Kind::quadratic, e.ys, e.omega2, N, e.a * e.a, Interval(1.2, 2)),
                N + 1.0, 0.15)
        << "N = " << N;
  }
}

TEST(QuadAudit, PrintedImplicitRelationIsOffByOmegaMinusX) {
  // omega^2 = x^2 - 1, y0 = 1, a = 1, int_1^x omega = (x omega - log(x + omega)) / 2
  for (double x : {1.1, 1.5, 2.0}) {
    const double w = std::sqrt(x * x - 1);
    const double phase = 0.5 * (x * w - std::log(x + w));
    const double printed = quad_printed_implicit_defect(w, 1.0, 1.0, phase);
    const double corrected = quad_implicit_defect(w, 1.0, 1.0, phase);
    std::cout << "x = " << x << ": printed defect " << printed << " (omega - x = " << w - x
              << "), corrected defect " << corrected << "\n";
    EXPECT_NEAR(printed, w - x, 1e-12);
    EXPECT_GT(std::abs(printed), 0.1);
    EXPECT_LT(std::abs(corrected), 1e-12);
  }
}

TEST(QuadAudit, PrintedFirstForcingHoldsLinearTerms) {
  const auto e = quad_expand(quartic(), 1e-2, 1);
  const F1Audit a = quad_f1_audit(e);
  std::cout << "printed F1 - (mechanical F1 + f y1' + g y1): " << a.literal_defect
            << "; after restoring the two omega factors: " << a.defect_after_omega_factors
            << "; |f y1' + g y1| = " << a.linear_part << "\n";
  EXPECT_GT(a.linear_part, 1e-3);
  EXPECT_GT(a.literal_defect, 1e-3);
  EXPECT_LT(a.defect_after_omega_factors, 1e-10);
}
