#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "uniwkb/langer_linear.hpp"
#include "uniwkb/reconstruct.hpp"
#include "uniwkb/tp_series.hpp"

using namespace uniwkb;

namespace {

using Gamma = std::array<Rational, 4>;

const DingleCoefficients& dingle() {
  static const DingleCoefficients d = dingle_coefficients();
  return d;
}

}  // namespace

TEST(SigmaLowest, LinearOmegaIsExact) {
  const Gamma g{1, 0, 0, 0};
  const std::vector<Rational> expect{0, 1, 0, 0, 0};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(dingle().sigma[k].value(g), expect[k]) << "sigma" << k;
}

TEST(SigmaLowest, QuadraticTermCoefficients) {
  const Gamma g{1, 1, 0, 0};
  EXPECT_EQ(dingle().sigma[2].value(g), Rational(1, 5));
  EXPECT_EQ(dingle().sigma[3].value(g), Rational(-12, 175));
  EXPECT_EQ(dingle().sigma[4].value(g), Rational(148, 2625));
}

TEST(SigmaLowest, CubeRootOfSlope) { EXPECT_EQ(dingle().sigma[1].value({8, 0, 0, 0}), Rational(2)); }

TEST(SigmaLowest, SymbolicFormMatchesClosedForm) {
  const auto printed = sigma_lowest_printed();
  ASSERT_EQ(dingle().sigma.size(), printed.size());
  for (std::size_t k = 0; k < printed.size(); ++k) EXPECT_EQ(dingle().sigma[k], printed[k]) << "sigma" << k;
  EXPECT_EQ(dingle().sigma[4].to_string(),
            "148/2625 g1^(-8/3) g2^3 - 44/315 g1^(-5/3) g2 g3 + 1/9 g1^(-2/3) g4");
}

TEST(SigmaLowest, RejectsDegenerateTurningPoint) {
  auto q = symbolic_q(3);
  q[0] = GammaPoly();
  EXPECT_THROW(sigma_lowest(q), TurningPointError);
}

TEST(SigmaCorrections, ZerothCoefficient) {
  EXPECT_EQ(dingle().sigma0_eps.value({1, 0, 1, 0}), Rational(1, 14));
  EXPECT_EQ(dingle().sigma0_eps.value({1, 1, 0, 0}), Rational(-9, 140));
  EXPECT_EQ(dingle().sigma0_eps.value({1, 0, 0, 0}), Rational(0));
  EXPECT_EQ(dingle().sigma0_eps, sigma0_correction_printed());
}

TEST(SigmaCorrections, FirstCoefficient) {
  EXPECT_EQ(dingle().sigma1_eps.value({1, 1, 0, 0}), Rational(7, 225));
  EXPECT_EQ(dingle().sigma1_eps.value({1, 0, 0, 1}), Rational(1, 54));
  EXPECT_EQ(dingle().sigma1_eps.value({1, 1, 1, 0}), Rational(7, 225) - Rational(7, 135));
}

// y0 series -> y1 constant -> sigma_1 correction reproduces the closed form,
// and each intermediate matches its own closed form.
TEST(SigmaCorrections, ChainReproducesClosedForm) {
  const auto& d = dingle();
  const auto y0_printed = y0_from_sigma_printed(d.sigma);
  for (std::size_t k = 0; k < y0_printed.size(); ++k) EXPECT_EQ(d.y0[k], y0_printed[k]) << "y0 coefficient " << k;
  EXPECT_EQ(d.y1_at_tp, y1_leading_printed(d.sigma, GammaPoly::gamma(1)));
  EXPECT_EQ(sigma1_correction(d.y0[0], d.y1_at_tp), sigma1_correction_printed());
  EXPECT_EQ(d.y1_at_tp.value({1, 1, 0, 0}), Rational(-7, 450));
}

TEST(GammaSeries, CubeRootCubes) {
  const GammaSeries s = symbolic_q(3);
  const GammaSeries r = rpow(s, Rational(1, 3));
  const GammaSeries back = r * r * r;
  for (std::size_t k = 0; k <= s.order(); ++k) EXPECT_EQ(back[k], s[k]) << "x^" << k;
}

TEST(GammaSeries, IrrationalValueIsApproximated) {
  // g1 = 2: sigma1 = 2^{1/3}
  EXPECT_NEAR(dingle().sigma[1].evaluate({2, 0, 0, 0}), std::cbrt(2.0), 1e-15);
}

TEST(GammaSeries, AgreesWithNumericalPhase) {
  // omega^2 = x + x^2/2 + x^3/6 + x^4/24: g = (1, 1, 1, 1)
  const auto w = fit([](double x) { return x + x * x / 2 + x * x * x / 6 + x * x * x * x / 24; }, Interval(-1, 1), 1e-15);
  const auto e = langer_expand(w, 1e-2, 0);
  const GridFunction sigma = phase(e.ys[0], e.x_tp, 0.0);
  for (double x : {1e-3, -1e-3}) {
    double s = 0.0, xk = 1.0, fact = 1.0;
    for (std::size_t k = 1; k < dingle().sigma.size(); ++k) {
      xk *= x;
      fact *= static_cast<double>(k);
      s += dingle().sigma[k].evaluate({1, 1, 1, 1}) * xk / fact;
    }
    EXPECT_NEAR(sigma(x), s, 1e-9) << "x = " << x;
  }
}
