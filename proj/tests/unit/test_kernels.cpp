#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "kksampling/averager.hpp"
#include "kksampling/errors.hpp"
#include "kksampling/kernel.hpp"
#include "kksampling/special_functions.hpp"
#include "kksampling/synthesis.hpp"
#include "kksampling/trig_polynomial.hpp"
#include "oracles.hpp"

using namespace kks;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Kernel box_order_four_kernel() {
  TrigPolynomial t(1);
  t.add({0}, 11.0 / 12.0);
  t.add({1}, 5.0 / 24.0);
  t.add({2}, -1.0 / 6.0);
  t.add({3}, 1.0 / 24.0);
  return Kernel::sinc_combo(t);
}

}  // namespace

TEST(Sinc, Examples) {
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_EQ(sinc(3.0), 0.0);
  EXPECT_NEAR(sinc(0.5), 0.636619772367581343, 1e-15);
  EXPECT_NEAR(sinc(v2(0.5, 0.5)), 4.0 / (kPi * kPi), 1e-15);
  for (double t = -7.3; t < 7.3; t += 0.0917) EXPECT_LE(std::abs(sinc(t)), 1.0);
}

TEST(Sinc, NearLatticeZerosKeepsRelativeAccuracy) {
  for (int n : {1, 2, 3, 17, 250}) {
    for (double e : {1e-12, 3e-9, -5e-7, 2e-5, 9e-5, 2e-4, 0.1}) {
      const double t = n + e;
      const double exact_e = t - n;
      const long double ref = (n % 2 == 0 ? 1.0L : -1.0L) * std::sin(oracle::kPiL * exact_e) / (oracle::kPiL * t);
      EXPECT_NEAR(sinc(t) / static_cast<double>(ref), 1.0, 1e-13) << "t=" << n << "+" << e;
    }
  }
}

TEST(Sinc, ComplexArgumentMatchesRealAxis) {
  for (double t : {0.0, 1e-7, 0.2, -0.4}) EXPECT_NEAR(std::abs(sinc(cplx(t, 0.0)) - sinc(t)), 0.0, 1e-15);
  // sinc(iy) = sinh(pi y) / (pi y)
  EXPECT_NEAR(sinc(cplx(0.0, 0.3)).real(), std::sinh(kPi * 0.3) / (kPi * 0.3), 1e-14);
}

TEST(Sinc, PartitionOfUnityDefectShrinksWithK) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_small = 0.0;
  double worst_large = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double x = u(rng);
    for (int big_k : {1000, 10000}) {
      double s = 0.0;
      for (int k = -big_k; k <= big_k; ++k) s += sinc(x - k);
      const double defect = std::abs(s - 1.0);
      EXPECT_LE(defect, 2.0 / big_k);
      double& worst = big_k == 1000 ? worst_small : worst_large;
      worst = std::max(worst, defect);
    }
  }
  EXPECT_LT(worst_large, worst_small);
}

TEST(Bessel, MatchesStandardLibrary) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    for (double x = 0.0; x <= 40.0; x += 0.37) {
      EXPECT_NEAR(bessel_j(nu, x), std::cyl_bessel_j(nu, x), 1e-12) << "nu=" << nu << " x=" << x;
    }
  }
  EXPECT_NEAR(bessel_j_scaled(1.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(bessel_j_scaled(2.0, 1e-9), 0.125, 1e-15);
  EXPECT_NEAR(bessel_j_scaled(2.0, 3.0), std::cyl_bessel_j(2.0, 3.0) / 9.0, 1e-14);
  const cplx z2(0.4, 0.0);
  EXPECT_NEAR(bessel_j_scaled_series(1.0, z2).real(), bessel_j_scaled(1.0, std::sqrt(0.4)), 1e-15);
}

TEST(TrigPoly, PeriodicInEveryCoordinate) {
  TrigPolynomial t(2);
  t.add({0, 0}, 1.0);
  t.add({1, -2}, cplx(0.25, -0.5));
  t.add({3, 1}, cplx(-1.5, 0.125));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec xi = v2(u(rng), u(rng));
    EXPECT_LE(std::abs(t(xi) - t(Vec(xi + v2(1, 0)))), 1e-12);
    EXPECT_LE(std::abs(t(xi) - t(Vec(xi + v2(0, 1)))), 1e-12);
  }
}

TEST(TrigPoly, DerivativesAndProduct) {
  TrigPolynomial a(1);
  a.add({1}, 2.0);
  a.add({-1}, 1.0);
  // D T(0) = 2 (2 pi i) + (-2 pi i)
  EXPECT_NEAR(std::abs(a.derivative_at_zero({1}) - cplx(0.0, kTwoPi)), 0.0, 1e-13);
  const TrigPolynomial sq = a * a;
  EXPECT_NEAR(std::abs(sq.coefficient({0}) - cplx(4.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sq.coefficient({2}) - cplx(4.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sq(v1(0.3)) - a(v1(0.3)) * a(v1(0.3))), 0.0, 1e-13);
  const TrigPolynomial e = TrigPolynomial::embed(a, 1, 2);
  EXPECT_NEAR(std::abs(e(v2(0.7, 0.3)) - a(v1(0.3))), 0.0, 1e-14);
  EXPECT_THROW(a.add({1, 1}, 1.0), InvalidArgument);
}

TEST(TrigPoly, JsonRoundTripIsBitExact) {
  TrigPolynomial t(2);
  t.add({0, 0}, cplx(0.1, -0.0));
  t.add({2, -1}, cplx(5.0 / 24.0, 1e-300));
  t.add({-3, 4}, cplx(-kPi, std::nextafter(1.0, 2.0)));
  const std::string text = coefficients_to_json(t).dump();
  const TrigPolynomial back = coefficients_from_json(2, nlohmann::json::parse(text));
  ASSERT_EQ(back.size(), t.size());
  for (const auto& [l, a] : t.coefficients()) {
    const cplx b = back.coefficient(l);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.real()), std::bit_cast<std::uint64_t>(b.real()));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.imag()), std::bit_cast<std::uint64_t>(b.imag()));
  }
  EXPECT_TRUE(std::signbit(back.coefficient({0, 0}).imag()));
  EXPECT_THROW(coefficients_from_json(1, nlohmann::json::parse(text)), InvalidArgument);
}

TEST(Kernel, PointValues) {
  EXPECT_NEAR(box_order_four_kernel()(v1(0.0)), 11.0 / 12.0, 1e-15);
  EXPECT_NEAR(Kernel::sinc_squared(1, 1.0)(v1(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(Kernel::sinc_squared(1, 2.0)(v1(0.0)), 0.5, 1e-15);
  EXPECT_NEAR(Kernel::bochner_riesz(2, 1.0)(v2(0.0, 0.0)), kPi / 2.0, 1e-13);
  // Gamma(1 + delta) pi / Gamma(2 + delta) = pi / (1 + delta)
  EXPECT_NEAR(Kernel::bochner_riesz(2, 0.5)(v2(0.0, 0.0)), kPi / 1.5, 1e-13);
}

TEST(Kernel, FourierExamples) {
  const auto s = Kernel::sinc(1);
  EXPECT_NEAR(std::abs(s.fourier(v1(0.25)) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(std::abs(s.fourier(v1(0.75))), 0.0);
  const auto br = Kernel::bochner_riesz(2, 1.0);
  EXPECT_NEAR(br.fourier(v2(0.3, 0.4)).real(), 0.75, 1e-15);
  EXPECT_NEAR(Kernel::bochner_riesz(2, 2.0).fourier(v2(0.3, 0.4)).real(), 0.5625, 1e-15);
  EXPECT_NEAR(std::abs(br.fourier(v2(0.3, 0.4)) - br.fourier(v2(0.5, 0.0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(br.fourier(v2(0.0, -0.5)) - br.fourier(v2(-0.4, 0.3))), 0.0, 1e-14);
  EXPECT_EQ(std::abs(br.fourier(v2(0.8, 0.8))), 0.0);
  EXPECT_NEAR(Kernel::sinc_squared(1, 2.0).fourier(v1(0.2)).real(), 0.6, 1e-15);
  EXPECT_EQ(std::abs(Kernel::sinc_squared(1, 2.0).fourier(v1(0.6))), 0.0);
}

TEST(Kernel, DecayClassesAndSupport) {
  EXPECT_EQ(Kernel::sinc(1).decay_class(), DecayClass::l2_only);
  EXPECT_EQ(box_order_four_kernel().decay_class(), DecayClass::l2_only);
  EXPECT_EQ(Kernel::sinc_squared(1, 2.0).decay_class(), DecayClass::summable);
  EXPECT_EQ(Kernel::bochner_riesz(2, 1.0).decay_class(), DecayClass::summable);
  EXPECT_EQ(Kernel::bochner_riesz(2, 0.5).decay_class(), DecayClass::l2_only);
  EXPECT_DOUBLE_EQ(Kernel::bochner_riesz(2, 1.0).freq_support_radius(), 1.0);
  EXPECT_DOUBLE_EQ(Kernel::sinc(1).freq_support_radius(), 0.5);
  EXPECT_THROW(Kernel::bochner_riesz(2, 0.0), InvalidArgument);
  EXPECT_THROW(Kernel::sinc_squared(1, -1.0), InvalidArgument);
}

TEST(Kernel, SincComboMatchesInverseTransform) {
  const auto k = box_order_four_kernel();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng);
    const auto ref = oracle::inverse_fourier([&](double xi) { return k.fourier(v1(xi)); }, x, -0.5, 0.5);
    EXPECT_NEAR(k(v1(x)), ref.real(), 1e-8);
    EXPECT_NEAR(ref.imag(), 0.0, 1e-8);
  }
}

TEST(Kernel, SincSquaredMatchesInverseTransform) {
  const auto k = Kernel::sinc_squared(1, 2.0);
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng);
    const auto ref = oracle::inverse_fourier([&](double xi) { return k.fourier(v1(xi)); }, x, -0.5, 0.5, {0.0});
    EXPECT_NEAR(k(v1(x)), ref.real(), 1e-8);
  }
}

TEST(Kernel, BochnerRieszMatchesHankelTransform) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const auto k = Kernel::bochner_riesz(2, delta);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 20; ++i) {
      const Vec x = v2(u(rng), u(rng));
      EXPECT_NEAR(k(x), oracle::bochner_riesz_2d(delta, x.norm()), 1e-8) << "delta=" << delta;
    }
  }
  const auto k1 = Kernel::bochner_riesz(1, 1.0);
  for (double x : {0.0, 0.3, 1.7, 4.2}) {
    const auto ref = oracle::inverse_fourier([&](double xi) { return k1.fourier(v1(xi)); }, x, -1.0, 1.0);
    EXPECT_NEAR(k1(v1(x)), ref.real(), 1e-8);
  }
}

TEST(Kernel, SymbolDerivativesMatchFiniteDifferences) {
  const auto br = Kernel::bochner_riesz(2, 1.5);
  const auto along = [&](double t) { return br.fourier(v2(t, 0.0)); };
  EXPECT_NEAR(br.symbol_derivative({0, 0}).real(), 1.0, 1e-15);
  EXPECT_NEAR(br.symbol_derivative({2, 0}).real(), -3.0, 1e-12);
  EXPECT_NEAR(br.symbol_derivative({2, 0}).real(), oracle::derivative(along, 2, 1e-4).real(), 1e-5);
  EXPECT_NEAR(br.symbol_derivative({1, 0}).real(), 0.0, 1e-15);
  // The order-4 box kernel inverts the box symbol to fourth order: its symbol
  // agrees with pi xi / sin(pi xi) = 1 + (pi xi)^2 / 6 + 7 (pi xi)^4 / 360 + ...
  // through the third derivative.
  const auto k4 = box_order_four_kernel();
  const double taylor[] = {1.0, 0.0, kPi * kPi / 3.0, 0.0};
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(std::abs(k4.symbol_derivative({m}) - taylor[m]), 0.0, 1e-10) << m;
  for (int m = 0; m <= 2; ++m) {
    const auto fd = oracle::derivative([&](double t) { return k4.fourier(v1(t)); }, m, 1e-4);
    EXPECT_NEAR(std::abs(k4.symbol_derivative({m}) - fd), 0.0, 1e-4) << m;
  }
  EXPECT_THROW(Kernel::sinc_squared(1, 2.0).symbol_derivative({1}), InvalidArgument);
}

TEST(Kernel, GermAgreesWithFourierNearOrigin) {
  const auto br = Kernel::bochner_riesz(2, 0.5);
  const auto k4 = box_order_four_kernel();
  for (double t : {0.0, 0.05, -0.12, 0.2}) {
    CVec c2(2);
    c2 << cplx(t, 0.0), cplx(0.5 * t, 0.0);
    EXPECT_NEAR(std::abs(br.germ(c2) - br.fourier(v2(t, 0.5 * t))), 0.0, 1e-13);
    CVec c1(1);
    c1 << cplx(t, 0.0);
    EXPECT_NEAR(std::abs(k4.germ(c1) - k4.fourier(v1(t))), 0.0, 1e-14);
  }
}

TEST(Kernel, JsonRoundTrip) {
  for (const auto& k : {box_order_four_kernel(), Kernel::sinc(2), Kernel::sinc_squared(1, 2.0),
                        Kernel::bochner_riesz(2, 0.5)}) {
    const auto back = Kernel::from_json(nlohmann::json::parse(k.to_json().dump()));
    EXPECT_EQ(back.to_json(), k.to_json());
    const Vec x = Vec::Constant(k.dim(), 0.37);
    EXPECT_EQ(back(x), k(x));
  }
  EXPECT_THROW(Kernel::from_json(nlohmann::json{{"variant", "spline"}, {"dim", 1}}), InvalidArgument);
  EXPECT_THROW(Kernel::from_json(nlohmann::json{{"dim", 1}}), InvalidArgument);
}

TEST(Kernel, ComplexCoefficientsRejectedOnRealEvaluation) {
  TrigPolynomial t(1);
  t.add({0}, 1.0);
  t.add({1}, cplx(0.0, 0.5));
  const auto k = Kernel::sinc_combo(t);
  EXPECT_THROW(k(v1(0.3)), InvalidArgument);
  EXPECT_NEAR(k.evaluate_complex(v1(0.3)).imag(), 0.5 * sinc(1.3), 1e-15);
}

TEST(Averager, NormalizationAndValues) {
  EXPECT_NEAR(std::abs(Averager::centered_box(1).fourier(v1(0.0)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(Averager::ball(2, 1.0).fourier(v2(0, 0)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(Averager::box(v1(0.0), v1(1.0)).fourier(v1(0.0)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(Averager::centered_box(1).fourier(v1(1.0))), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(Averager::centered_box(2)(v2(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(Averager::ball(2, 1.0)(v2(2, 0)), 0.0);
  EXPECT_NEAR(Averager::ball(2, 1.0)(v2(0, 0)), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(Averager::ball(2, 2.0).measure(), 4.0 * kPi, 1e-14);
  EXPECT_TRUE(Averager::centered_box(2).is_symmetric());
  EXPECT_FALSE(Averager::box(v1(0.0), v1(1.0)).is_symmetric());
  EXPECT_NEAR(Averager::ball(2, 1.5).support_radius(), 1.5, 0.0);
  EXPECT_THROW(Averager::box(v1(1.0), v1(0.0)), InvalidArgument);
  EXPECT_THROW(Averager::ball(3, 1.0), InvalidArgument);
}

TEST(Averager, ShiftedBoxTransform) {
  const auto a = Averager::box(v1(0.0), v1(1.0));
  for (double xi : {0.1, -0.37, 0.9, 2.3}) {
    const cplx expected = std::polar(1.0, -kPi * xi) * static_cast<double>(oracle::sinc(xi));
    EXPECT_NEAR(std::abs(a.fourier(v1(xi)) - expected), 0.0, 1e-15);
  }
}

TEST(Averager, BallTransformMatchesBessel) {
  const auto a = Averager::ball(2, 1.0);
  for (double r : {0.05, 0.3, 0.77, 1.6, 3.1}) {
    const double expected = std::cyl_bessel_j(1.0, kTwoPi * r) / (kPi * r);
    EXPECT_NEAR(a.fourier(v2(0.6 * r, 0.8 * r)).real(), expected, 1e-13);
  }
}

TEST(Averager, BoxTransformMatchesQuadrature) {
  const auto a = Averager::box(v2(-0.2, 0.1), v2(0.5, 0.4));
  const double area = 0.7 * 0.3;
  for (const Vec& xi : {v2(0.3, -1.2), v2(1.7, 0.4)}) {
    const double re = oracle::integrate_2d(
        [&](double x, double y) { return std::cos(kTwoPi * (x * xi[0] + y * xi[1])) / area; }, -0.2, 0.5, 0.1, 0.4);
    const double im = oracle::integrate_2d(
        [&](double x, double y) { return -std::sin(kTwoPi * (x * xi[0] + y * xi[1])) / area; }, -0.2, 0.5, 0.1,
        0.4);
    EXPECT_NEAR(std::abs(a.fourier(xi) - cplx(re, im)), 0.0, 1e-12);
  }
}

TEST(Averager, SymbolDerivatives) {
  EXPECT_NEAR(Averager::centered_box(1).symbol_derivative({2}).real(), -kPi * kPi / 3.0, 1e-13);
  const auto ball = Averager::ball(2, 1.0);
  EXPECT_NEAR(ball.symbol_derivative({2, 0}).real(), -kPi * kPi, 1e-12);
  EXPECT_NEAR(ball.symbol_derivative({0, 2}).real(), -kPi * kPi, 1e-12);
  EXPECT_NEAR(std::abs(ball.symbol_derivative({1, 0})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ball.symbol_derivative({1, 2})), 0.0, 1e-15);
  const auto fd_ball = oracle::derivative([&](double t) { return ball.fourier(v2(t, 0.0)); }, 2, 1e-4);
  EXPECT_NEAR(fd_ball.real(), -kPi * kPi, 1e-5);

  const auto box = Averager::box(v1(0.1), v1(0.7));
  for (int m = 0; m <= 4; ++m) {
    const auto fd = oracle::derivative([&](double t) { return box.fourier(v1(t)); }, m, 2e-3);
    EXPECT_NEAR(std::abs(box.symbol_derivative({m}) - fd), 0.0, 1e-3 * std::max(1.0, std::abs(fd))) << m;
  }
}

TEST(Averager, GermAgreesWithFourier) {
  const auto shifted = Averager::box(v2(0.0, -0.25), v2(1.0, 0.5));
  const auto ball = Averager::ball(2, 0.8);
  for (double t : {0.0, 0.04, -0.2}) {
    CVec c(2);
    c << cplx(t, 0.0), cplx(-t, 0.0);
    EXPECT_NEAR(std::abs(shifted.germ(c) - shifted.fourier(v2(t, -t))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(ball.germ(c) - ball.fourier(v2(t, -t))), 0.0, 1e-14);
  }
}

TEST(Averager, ShiftedComboEvaluation) {
  const auto base = Averager::centered_box(1);
  TrigPolynomial b(1);
  b.add({0}, 1.5);
  b.add({-1}, -0.25);
  b.add({1}, -0.25);
  const auto combo = Averager::shifted_combo(base, b);
  EXPECT_TRUE(combo.is_symmetric());
  EXPECT_NEAR(combo.support_radius(), 1.5, 1e-15);
  for (double x : {0.0, 0.7, -1.2, 2.0}) {
    const double expected = 1.5 * base(v1(x)) - 0.25 * base(v1(x - 1.0)) - 0.25 * base(v1(x + 1.0));
    EXPECT_NEAR(combo(v1(x)), expected, 1e-15);
  }
  for (double xi : {0.0, 0.2, 0.45}) {
    EXPECT_NEAR(std::abs(combo.fourier(v1(xi)) - b(v1(xi)) * base.fourier(v1(xi))), 0.0, 1e-15);
  }
  const auto back = Averager::from_json(nlohmann::json::parse(combo.to_json().dump()));
  EXPECT_EQ(back.to_json(), combo.to_json());
  EXPECT_EQ(back(v1(0.7)), combo(v1(0.7)));
}

TEST(Averager, JsonRoundTrip) {
  for (const auto& a : {Averager::centered_box(2), Averager::box(v1(0.0), v1(1.0)), Averager::ball(2, 0.75),
                        Averager::sinc(1)}) {
    const auto back = Averager::from_json(nlohmann::json::parse(a.to_json().dump()));
    EXPECT_EQ(back.to_json(), a.to_json());
  }
  EXPECT_THROW(Averager::from_json(nlohmann::json{{"variant", "gaussian"}}), InvalidArgument);
}
