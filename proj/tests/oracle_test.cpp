#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "uniwkb/oracle.hpp"

using namespace uniwkb;

namespace {

// u'' = x u with u(2) = 1, u'(2) = -sqrt(2), summed as a Taylor series about 2.
double airy_taylor(double x) {
  std::vector<double> c(200);
  c[0] = 1.0;
  c[1] = -std::sqrt(2.0);
  c[2] = 2.0 * c[0] / 2.0;
  for (std::size_t n = 1; n + 2 < c.size(); ++n) c[n + 2] = (2.0 * c[n] + c[n - 1]) / ((n + 2.0) * (n + 1.0));
  double v = 0.0, p = 1.0;
  for (double ci : c) {
    v += ci * p;
    p *= x - 2.0;
  }
  return v;
}

}  // namespace

TEST(IntegrateLinear, DecayingExponential) {
  const Interval iv(0, 1);
  const auto s = integrate_linear(GridFunction::constant(iv, 1.0), 1.0, 0.0, 1.0, -1.0, iv);
  EXPECT_NEAR(s(1.0), std::exp(-1.0), 1e-10);
  EXPECT_NEAR(s(0.37), std::exp(-0.37), 1e-10);
  EXPECT_NEAR(s.deriv(0.61), -std::exp(-0.61), 1e-10);
}

TEST(IntegrateLinear, ZeroFrequencyIsLinear) {
  const Interval iv(0, 1);
  const auto s = integrate_linear(GridFunction::constant(iv, 0.0), 1.0, 0.0, 0.0, 1.0, iv);
  for (double x : {0.1, 0.5, 1.0}) EXPECT_NEAR(s(x), x, 1e-13);
}

TEST(IntegrateLinear, AiryRatioAgreesWithPowerSeries) {
  const Interval iv(0, 2);
  const auto w = fit([](double x) { return x; }, iv, 1e-15);
  const auto s = integrate_linear(w, 1.0, 2.0, 1.0, -std::sqrt(2.0), iv);
  EXPECT_NEAR(s(1.0) / s(2.0), airy_taylor(1.0), 1e-9);
  EXPECT_NEAR(s(0.0) / s(2.0), airy_taylor(0.0), 1e-9);
}

// Each solution is recessive in its direction of integration, so the
// Wronskian is formed without cancellation.
TEST(IntegrateLinear, WronskianIsConserved) {
  const Interval iv(-1, 1);
  const auto w = fit([](double x) { return 1 + x * x; }, iv, 1e-15);
  for (double eps : {1.0, 1e-2}) {
    const double k = std::sqrt(2.0 / eps);
    const auto a = integrate_linear(w, eps, 1.0, 1.0, -k, iv);
    const auto b = integrate_linear(w, eps, -1.0, 1.0, k, iv);
    auto wr = [&](double x) { return (a.value(x) * b.derivative(x) - b.value(x) * a.derivative(x)).to_double(); };
    const double w0 = wr(-1.0);
    double drift = 0.0;
    for (double x : probe_points(iv, 200)) drift = std::max(drift, std::abs(wr(x) / w0 - 1.0));
    EXPECT_LT(drift, 1e-10) << "eps " << eps;
  }
}

TEST(IntegrateLinear, TighterToleranceNeverWorse) {
  const Interval iv(0, 1);
  const auto one = GridFunction::constant(iv, 4.0);
  double last = INFINITY;
  for (double rtol : {1e-6, 1e-8, 1e-10, 1e-12}) {
    const auto s = integrate_linear(one, 1.0, 0.0, 1.0, -2.0, iv, rtol);
    double err = 0.0;
    for (double x : probe_points(iv, 100)) err = std::max(err, std::abs(s(x) - std::exp(-2 * x)) / std::exp(-2 * x));
    EXPECT_LE(err, last * 1.5 + 1e-15) << "rtol " << rtol;
    last = err;
  }
  EXPECT_LT(last, 1e-10);
}

TEST(IntegrateLinear, SmallEpsCarriesScale) {
  const Interval iv(-1, 1);
  const auto w = fit([](double x) { return 1 + x * x; }, iv, 1e-15);
  const double eps = 1e-7;
  const auto s = integrate_linear(w, eps, 1.0, 1.0, -std::sqrt(2.0 / eps), iv);
  // WKB: log u(-1) ~ (1/sqrt(eps)) int_{-1}^{1} sqrt(1 + x^2) dx
  const double phase = std::sqrt(2.0) + std::asinh(1.0);
  EXPECT_NEAR(s.value(-1.0).log_abs() / (phase / std::sqrt(eps)), 1.0, 1e-4);
  EXPECT_THROW(s.value(-1.0).to_double(), OverflowError);
}

TEST(Residual, ExactLeadingOrders) {
  const Interval iv(0, 1);
  const auto w = fit([](double x) { return 1 + x * x; }, iv, 1e-15);
  const auto y = fit([](double x) { return std::pow(1 + x * x, -0.25); }, iv, 1e-15);
  EXPECT_LT(residual(Kind::constant, y, w, 0.0).max_abs(), 1e-13);
  const auto lin = fit([](double x) { return x; }, Interval(-1, 1), 1e-15);
  const auto one = GridFunction::constant(Interval(-1, 1), 1.0);
  for (double eps : {1.0, 1e-3}) EXPECT_LT(residual(Kind::linear, one, lin, eps).max_abs(), 1e-15);
}

TEST(ConvergenceSlope, Examples) {
  EXPECT_NEAR(convergence_slope({1e-1, 1e-2, 1e-3}, {1e-2, 1e-4, 1e-6}), 2.0, 1e-12);
  EXPECT_NEAR(convergence_slope({1e-1, 1e-2, 1e-3}, {3.0, 3.0, 3.0}), 0.0, 1e-12);
  EXPECT_THROW(convergence_slope({1e-1, 1e-2, 5e-3}, {1, 1, 1}), ConfigError);
  EXPECT_THROW(convergence_slope({1e-1, 1e-2}, {1, 1}), ConfigError);
}
