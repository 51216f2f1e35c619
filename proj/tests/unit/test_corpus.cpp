#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kksampling/errors.hpp"
#include "kksampling/test_function.hpp"
#include "oracles.hpp"

using namespace kks;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST(Corpus, ContainsTheRequiredEntries) {
  for (const auto& id : {"gaussian", "gaussian2d", "sinc2_quarter", "sinc2_quarter_2d", "sinc", "indicator_unit",
                         "cusp", "radial_bump2d"})
    EXPECT_NO_THROW(corpus_function(id)) << id;
  EXPECT_THROW(corpus_function("weierstrass"), InvalidArgument);
  for (const auto& f : corpus()) {
    EXPECT_FALSE(f.smoothness.empty()) << f.id;
    EXPECT_FALSE(f.decay.empty()) << f.id;
  }
}

TEST(Corpus, Normalizations) {
  const auto& g = corpus_function("gaussian");
  EXPECT_DOUBLE_EQ(g(v1(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(g.fourier(v1(0.0)).real(), 1.0);
  EXPECT_EQ(std::abs(corpus_function("sinc2_quarter").fourier(v1(0.3))), 0.0);
  EXPECT_NEAR(corpus_function("sinc2_quarter").fourier(v1(0.0)).real(), 4.0, 1e-15);
  EXPECT_NEAR(corpus_function("cusp")(v1(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(corpus_function("cusp")(v1(0.75)), 0.125, 1e-15);
  EXPECT_EQ(corpus_function("indicator_unit")(v1(1.0)), 1.0);
  EXPECT_EQ(corpus_function("indicator_unit")(v1(1.0 + 1e-12)), 0.0);
  EXPECT_NEAR(corpus_function("radial_bump2d")(v2(0.0, 0.0)), 1.0, 1e-15);
  EXPECT_EQ(corpus_function("radial_bump2d")(v2(0.8, 0.8)), 0.0);
}

TEST(Corpus, SpatialIntegralsMatchTransformAtZero) {
  for (const auto& id : {"gaussian", "sinc2_quarter"}) {
    const auto& f = corpus_function(id);
    const double lim = std::string(id) == "gaussian" ? 8.0 : 4000.0;
    std::vector<double> cuts;
    for (int i = -999; i < 1000; ++i) cuts.push_back(4.0 * i);
    const double integral = oracle::integrate([&](double x) { return f(v1(x)); }, -lim, lim, cuts);
    EXPECT_NEAR(integral, f.fourier(v1(0.0)).real(), 2e-3) << id;
  }
}

TEST(Corpus, BandLimitsHold) {
  std::mt19937 rng(17);
  for (const auto& f : corpus()) {
    if (!f.band_limit) continue;
    ASSERT_TRUE(f.has_fourier()) << f.id;
    std::uniform_real_distribution<double> u(*f.band_limit * (1.0 + 1e-9), 10.0);
    std::bernoulli_distribution sign(0.5);
    for (int i = 0; i < 200; ++i) {
      Vec xi = Vec::Zero(f.dim);
      const int axis = static_cast<int>(rng() % static_cast<unsigned>(f.dim));
      xi[axis] = sign(rng) ? u(rng) : -u(rng);
      EXPECT_LT(std::abs(f.fourier(xi)), 1e-12) << f.id;
    }
  }
}

TEST(Corpus, InverseTransformRoundTrip) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& f : corpus()) {
    if (!f.has_fourier()) continue;
    const double band = f.band_limit ? *f.band_limit : 8.0;
    for (int i = 0; i < 10; ++i) {
      if (f.dim == 1) {
        const double x = u(rng);
        const auto value = oracle::inverse_fourier([&](double xi) { return f.fourier(v1(xi)); }, x, -band, band,
                                                   f.fourier_kinks);
        EXPECT_NEAR(value.real(), f(v1(x)), 1e-7) << f.id << " x=" << x;
        EXPECT_NEAR(value.imag(), 0.0, 1e-7) << f.id;
      } else {
        // Tensor entries: the transform factorizes along the axes.
        const Vec x = v2(u(rng), u(rng));
        const auto axis = [&](double t, int v) {
          return oracle::inverse_fourier(
              [&](double xi) {
                Vec e = Vec::Zero(2);
                e[v] = xi;
                return f.fourier(e) / f.fourier(Vec::Zero(2)) * std::sqrt(f.fourier(Vec::Zero(2)));
              },
              t, -band, band, f.fourier_kinks);
        };
        const cplx value = axis(x[0], 0) * axis(x[1], 1);
        EXPECT_NEAR(value.real(), f(x), 1e-7) << f.id;
      }
    }
  }
}

TEST(Corpus, ZeroCombinationAndTranslation) {
  const auto z = zero_function(2);
  EXPECT_EQ(z(v2(0.3, -4.0)), 0.0);
  EXPECT_EQ(std::abs(z.fourier(v2(0.1, 0.2))), 0.0);
  const auto& g = corpus_function("gaussian");
  const auto& c = corpus_function("cusp");
  const auto h = linear_combination(2.0, g, -1.0, c);
  EXPECT_NEAR(h(v1(0.5)), 2.0 * g(v1(0.5)) - c(v1(0.5)), 1e-15);
  EXPECT_FALSE(h.has_fourier());
  ASSERT_TRUE(h.support.has_value());
  EXPECT_DOUBLE_EQ(h.support->lower[0], -6.0);
  EXPECT_EQ(h.breakpoints, (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_THROW(linear_combination(1.0, g, 1.0, z), InvalidArgument);

  const auto t = translate(corpus_function("indicator_unit"), v1(0.25));
  EXPECT_EQ(t(v1(1.2)), 1.0);
  EXPECT_EQ(t(v1(0.2)), 0.0);
  EXPECT_EQ(t.breakpoints, (std::vector<double>{0.25, 1.25}));
  const auto tg = translate(g, v1(0.5));
  const cplx expected = g.fourier(v1(0.3)) * std::polar(1.0, -kTwoPi * 0.15);
  EXPECT_NEAR(std::abs(tg.fourier(v1(0.3)) - expected), 0.0, 1e-15);
}
