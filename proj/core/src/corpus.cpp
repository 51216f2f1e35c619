#include <algorithm>
#include <cmath>

#include "kksampling/errors.hpp"
#include "kksampling/special_functions.hpp"
#include "kksampling/test_function.hpp"

namespace kks {

bool Box::contains(const Vec& x) const {
  for (int v = 0; v < dim(); ++v)
    if (x[v] < lower[v] || x[v] > upper[v]) return false;
  return true;
}

double Box::measure() const {
  double m = 1.0;
  for (int v = 0; v < dim(); ++v) m *= upper[v] - lower[v];
  return m;
}

namespace {

Box cube(int dim, double lo, double hi) {
  Box b{Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
  return b;
}

// (1 - 4|xi|)_+ scaled by 4: transform of sinc^2(x/4).
double triangle_quarter(double xi) { return 4.0 * std::max(0.0, 1.0 - 4.0 * std::abs(xi)); }

std::vector<TestFunction> build_corpus() {
  std::vector<TestFunction> out;

  {
    TestFunction f;
    f.id = "gaussian";
    f.dim = 1;
    f.eval = [](const Vec& x) { return std::exp(-kPi * x.squaredNorm()); };
    f.fourier = [](const Vec& xi) { return cplx(std::exp(-kPi * xi.squaredNorm()), 0.0); };
    f.smoothness = "smooth: finite n-th differences of every order";
    f.decay = "gaussian";
    f.support = cube(1, -6.0, 6.0);
    out.push_back(f);
    f.id = "gaussian2d";
    f.dim = 2;
    f.support = cube(2, -6.0, 6.0);
    out.push_back(f);
  }
  {
    TestFunction f;
    f.id = "sinc2_quarter";
    f.dim = 1;
    f.eval = [](const Vec& x) {
      const double s = sinc(x[0] / 4.0);
      return s * s;
    };
    f.fourier = [](const Vec& xi) { return cplx(triangle_quarter(xi[0]), 0.0); };
    f.band_limit = 0.25;
    f.smoothness = "band-limited, entire";
    f.decay = "|x|^-2";
    f.fourier_kinks = {-0.25, 0.0, 0.25};
    out.push_back(f);

    f.id = "sinc2_quarter_2d";
    f.dim = 2;
    f.eval = [](const Vec& x) {
      const double s = sinc(x[0] / 4.0) * sinc(x[1] / 4.0);
      return s * s;
    };
    f.fourier = [](const Vec& xi) { return cplx(triangle_quarter(xi[0]) * triangle_quarter(xi[1]), 0.0); };
    out.push_back(f);
  }
  {
    TestFunction f;
    f.id = "sinc";
    f.dim = 1;
    f.eval = [](const Vec& x) { return sinc(x[0]); };
    f.fourier = [](const Vec& xi) { return cplx(std::abs(xi[0]) <= 0.5 ? 1.0 : 0.0, 0.0); };
    f.band_limit = 0.5;
    f.smoothness = "band-limited, entire";
    f.decay = "|x|^-1, not integrable";
    f.fourier_kinks = {-0.5, 0.5};
    out.push_back(f);
  }
  {
    TestFunction f;
    f.id = "indicator_unit";
    f.dim = 1;
    f.eval = [](const Vec& x) { return (x[0] >= 0.0 && x[0] <= 1.0) ? 1.0 : 0.0; };
    f.smoothness = "jump discontinuity";
    f.decay = "compact support";
    f.support = cube(1, 0.0, 1.0);
    f.breakpoints = {0.0, 1.0};
    out.push_back(f);
  }
  {
    TestFunction f;
    f.id = "cusp";
    f.dim = 1;
    f.eval = [](const Vec& x) {
      const double r = 1.0 - std::abs(x[0]);
      return r > 0.0 ? r * std::sqrt(r) : 0.0;
    };
    f.smoothness = "finite: kink at 0, (1-|x|)^{3/2} edges";
    f.decay = "compact support";
    f.support = cube(1, -1.0, 1.0);
    f.breakpoints = {-1.0, 0.0, 1.0};
    out.push_back(f);
  }
  {
    TestFunction f;
    f.id = "radial_bump2d";
    f.dim = 2;
    f.eval = [](const Vec& x) {
      const double r2 = x.squaredNorm();
      return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    };
    f.smoothness = "smooth, compactly supported";
    f.decay = "compact support";
    f.support = cube(2, -1.0, 1.0);
    out.push_back(f);
  }
  return out;
}

}  // namespace

const std::vector<TestFunction>& corpus() {
  static const std::vector<TestFunction> functions = build_corpus();
  return functions;
}

const TestFunction& corpus_function(const std::string& id) {
  for (const auto& f : corpus())
    if (f.id == id) return f;
  throw InvalidArgument("unknown corpus function '" + id + "'");
}

TestFunction zero_function(int dim) {
  TestFunction f;
  f.id = "zero";
  f.dim = dim;
  f.eval = [](const Vec&) { return 0.0; };
  f.fourier = [](const Vec&) { return cplx{}; };
  f.band_limit = 0.0;
  f.smoothness = "constant";
  f.decay = "identically zero";
  f.support = cube(dim, 0.0, 0.0);
  return f;
}

TestFunction linear_combination(double alpha, const TestFunction& f, double beta, const TestFunction& g) {
  if (f.dim != g.dim) throw InvalidArgument("linear combination of functions in different dimensions");
  TestFunction h;
  h.id = f.id + "+" + g.id;
  h.dim = f.dim;
  h.eval = [alpha, beta, fe = f.eval, ge = g.eval](const Vec& x) { return alpha * fe(x) + beta * ge(x); };
  if (f.has_fourier() && g.has_fourier())
    h.fourier = [alpha, beta, ff = f.fourier, gf = g.fourier](const Vec& xi) { return alpha * ff(xi) + beta * gf(xi); };
  if (f.band_limit && g.band_limit) h.band_limit = std::max(*f.band_limit, *g.band_limit);
  h.smoothness = "combination";
  h.decay = "combination";
  if (f.support && g.support) {
    h.support = Box{f.support->lower.cwiseMin(g.support->lower), f.support->upper.cwiseMax(g.support->upper)};
  }
  h.breakpoints = f.breakpoints;
  h.breakpoints.insert(h.breakpoints.end(), g.breakpoints.begin(), g.breakpoints.end());
  std::sort(h.breakpoints.begin(), h.breakpoints.end());
  h.breakpoints.erase(std::unique(h.breakpoints.begin(), h.breakpoints.end()), h.breakpoints.end());
  h.fourier_kinks = f.fourier_kinks;
  h.fourier_kinks.insert(h.fourier_kinks.end(), g.fourier_kinks.begin(), g.fourier_kinks.end());
  std::sort(h.fourier_kinks.begin(), h.fourier_kinks.end());
  h.fourier_kinks.erase(std::unique(h.fourier_kinks.begin(), h.fourier_kinks.end()), h.fourier_kinks.end());
  return h;
}

TestFunction translate(const TestFunction& f, const Vec& shift) {
  if (shift.size() != f.dim) throw InvalidArgument("shift dimension mismatch");
  TestFunction h = f;
  h.id = f.id + "_shifted";
  h.eval = [fe = f.eval, shift](const Vec& x) { return fe(x - shift); };
  if (f.has_fourier())
    h.fourier = [ff = f.fourier, shift](const Vec& xi) {
      return ff(xi) * std::polar(1.0, -kTwoPi * shift.dot(xi));
    };
  if (f.support) h.support = Box{f.support->lower + shift, f.support->upper + shift};
  if (f.dim == 1)
    for (auto& b : h.breakpoints) b += shift[0];
  return h;
}

}  // namespace kks
