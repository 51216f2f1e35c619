#include <cmath>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "kksampling/analysis.hpp"
#include "kksampling/errors.hpp"

using namespace kks;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Box interval(double a, double b) { return Box{v1(a), v1(b)}; }

GridValues constant_grid(const EvalGrid& g, double c) { return GridValues{g, std::vector<double>(g.size(), c), {}}; }

TestFunction affine() {
  TestFunction f;
  f.id = "affine";
  f.dim = 1;
  f.eval = [](const Vec& x) { return 2.0 * x[0] - 0.5; };
  return f;
}

}  // namespace

TEST(LpDistance, Examples) {
  const EvalGrid unit(interval(0.0, 1.0), 50);
  const EvalGrid two(interval(0.0, 2.0), 50);
  const auto ones = constant_grid(unit, 1.0);
  EXPECT_EQ(lp_distance(ones, ones, 2.0), 0.0);
  EXPECT_NEAR(lp_distance(ones, constant_grid(unit, 0.0), 2.0), 1.0, 1e-14);
  EXPECT_NEAR(lp_distance(constant_grid(two, 1.0), constant_grid(two, 0.0), 1.0), 2.0, 1e-14);
  EXPECT_NEAR(lp_distance(constant_grid(two, 3.0), constant_grid(two, 0.5), INFINITY), 2.5, 0.0);
  EXPECT_THROW(lp_distance(ones, constant_grid(two, 1.0), 2.0), GeometryMismatch);
  EXPECT_THROW(lp_norm(ones, 0.5), InvalidArgument);
}

TEST(DeltaSet, Sizes) {
  EXPECT_EQ(delta_set(1, 0.1).size(), 16u);
  EXPECT_EQ(delta_set(2, 0.1).size(), 128u);
  const auto d = delta_set(1, 0.5, DeltaSampling{4, 1});
  EXPECT_DOUBLE_EQ(d.back()[0], 0.5);
  EXPECT_DOUBLE_EQ(d.front()[0], 0.125);
  for (const auto& v : delta_set(2, 0.3)) EXPECT_LE(v.norm(), 0.3 + 1e-15);
  EXPECT_THROW(delta_set(1, 0.0), InvalidArgument);
}

TEST(Modulus, AffineSecondDifferenceVanishes) {
  const EvalGrid grid(interval(-1.0, 1.0), 200);
  EXPECT_LT(modulus_of_smoothness(affine(), 2, 0.25, 2.0, grid), 1e-13);
  EXPECT_NEAR(modulus_of_smoothness(affine(), 1, 0.25, INFINITY, grid), 0.5, 1e-13);
}

TEST(Modulus, IndicatorClosedForm) {
  const auto& chi = corpus_function("indicator_unit");
  const EvalGrid grid(interval(-1.0, 2.0), 4800);
  const double h = 1.0 / 16.0;
  EXPECT_NEAR(modulus_of_smoothness(chi, 1, h, 2.0, grid), std::sqrt(2.0 * h), 5e-3);
  for (double small_h : {1.0 / 64.0, 1.0 / 128.0})
    EXPECT_NEAR(modulus_of_smoothness(chi, 1, small_h, 2.0, grid), std::sqrt(2.0 * small_h), 5e-3);
}

TEST(Modulus, NeverExceedsTwoToTheNTimesNorm) {
  const EvalGrid g1(interval(-3.0, 4.0), 700);
  const EvalGrid g2(Box{Vec::Constant(2, -2.0), Vec::Constant(2, 2.0)}, 48);
  for (const auto& f : corpus()) {
    const EvalGrid& grid = f.dim == 1 ? g1 : g2;
    for (int n : {1, 2, 4})
      for (double p : {1.0, 2.0, double(INFINITY)}) {
        const double h = 0.3;
        const DeltaSampling s{8, 4};
        const auto r = modulus_properties_check(f, f, n, h, 1.0, p, grid, s);
        EXPECT_TRUE(r.bounded) << f.id << " n=" << n << " p=" << p;
        EXPECT_LE(r.omega_f, std::pow(2.0, n) * r.norm_f * (1.0 + 1e-12));
      }
  }
}

TEST(Modulus, MonotoneOnNestedDeltaSets) {
  const EvalGrid grid(interval(-2.0, 2.0), 400);
  for (const auto& id : {"cusp", "gaussian", "indicator_unit"}) {
    const auto& f = corpus_function(id);
    double previous = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double h = std::ldexp(1.0, -6 + i);
      const double w = modulus_of_smoothness(f, 2, h, 2.0, grid, DeltaSampling{4 << i, 1});
      EXPECT_GE(w, previous) << id << " i=" << i;
      previous = w;
    }
  }
}

TEST(Modulus, GaussianSaturates) {
  const auto& g = corpus_function("gaussian");
  const EvalGrid grid(interval(-4.0, 4.0), 2048);
  for (int n : {1, 2, 4}) {
    double lo = INFINITY, hi = 0.0;
    for (int k = 3; k <= 7; ++k) {
      const double h = std::ldexp(1.0, -k);
      const double r = modulus_of_smoothness(g, n, h, 2.0, grid) / std::pow(h, n);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 1.5) << "n=" << n;
  }
}

TEST(FitOrder, ExactPowerLaws) {
  std::vector<std::pair<double, double>> quartic, flat;
  for (int j = 3; j <= 7; ++j) {
    const double s = std::ldexp(1.0, -j);
    quartic.emplace_back(s, std::pow(s, 4.0));
    flat.emplace_back(s, 0.37);
  }
  EXPECT_NEAR(fit_order(quartic).slope, 4.0, 1e-12);
  EXPECT_NEAR(fit_order(flat).slope, 0.0, 1e-12);
  EXPECT_EQ(fit_order(quartic).used, 5u);
}

TEST(FitOrder, FloorsExcludeRows) {
  std::vector<std::pair<double, double>> rows;
  std::vector<double> floors;
  for (int j = 1; j <= 6; ++j) {
    const double s = std::ldexp(1.0, -j);
    rows.emplace_back(s, j <= 4 ? s * s : 1e-9);
    floors.push_back(1e-8);
  }
  const auto r = fit_order(rows, floors);
  EXPECT_EQ(r.used, 4u);
  EXPECT_NEAR(r.slope, 2.0, 1e-12);
  EXPECT_THROW(fit_order({{0.5, 1.0}, {0.25, 0.5}}), InvalidArgument);
  EXPECT_THROW(fit_order(rows, {1.0}), InvalidArgument);
}

TEST(ModulusProperties, Examples) {
  const EvalGrid grid(interval(-2.0, 3.0), 1000);
  const auto& g = corpus_function("gaussian");
  const auto same = modulus_properties_check(g, g, 2, 0.1, 1.0, 2.0, grid);
  EXPECT_TRUE(same.passed());
  EXPECT_NEAR(same.omega_sum, 2.0 * same.omega_f, 1e-12);
  EXPECT_DOUBLE_EQ(same.omega_f_scaled, same.omega_f);

  const auto& chi = corpus_function("indicator_unit");
  const auto r = modulus_properties_check(chi, corpus_function("cusp"), 1, 1.0 / 32.0, 2.0, 2.0, grid);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.omega_f_scaled / r.omega_f, 3.0);
  EXPECT_THROW(modulus_properties_check(chi, chi, 1, 0.1, 0.5, 2.0, grid), InvalidArgument);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Convergence, ReportShapeAndCsv) {
  ConvergencePlan plan;
  plan.f = corpus_function("gaussian");
  plan.window = interval(-3.0, 3.0);
  plan.j_min = 1;
  plan.j_max = 4;
  plan.config = {{"run.function", "gaussian"}};
  const auto report = run_convergence(plan);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_TRUE(std::isnan(report.rows[0].ratio));
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_EQ(report.rows[i].j, static_cast<int>(i) + 1);
    EXPECT_GE(report.rows[i].error, 0.0);
    EXPECT_DOUBLE_EQ(report.rows[i].scale, std::ldexp(1.0, -static_cast<int>(i) - 1));
  }
  EXPECT_TRUE(std::isfinite(report.fitted_order));
  const std::string csv = report.to_csv();
  EXPECT_EQ(csv.rfind("# run.function = gaussian\nj,scale,error,ratio,modulus,budget\n1,0.5,", 0), 0u);
  EXPECT_EQ(csv, run_convergence(plan).to_csv());
  const auto s = report.summary();
  for (const char* key : {"fitted_order", "constant_C", "consistency_ratio", "bound_consistent", "budget"})
    EXPECT_TRUE(s.contains(key)) << key;
  EXPECT_EQ(operator_kind_from_string(to_string(OperatorKind::kantorovich)), OperatorKind::kantorovich);
  EXPECT_THROW(operator_kind_from_string("wavelet"), InvalidArgument);
}
