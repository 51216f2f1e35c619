// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "kksampling/analysis.hpp"
#include "kksampling/cli/commands.hpp"
#include "kksampling/cli/config.hpp"
#include "kksampling/synthesis.hpp"

using namespace kks;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Box interval(double lo, double hi) { return Box{Vec::Constant(1, lo), Vec::Constant(1, hi)}; }
Box square(double lo, double hi) { return Box{Vec::Constant(2, lo), Vec::Constant(2, hi)}; }

double max_abs_diff(const GridValues& a, const GridValues& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

const TrigPolynomial& symbol_of(const Kernel& k) { return std::get<SincCombo>(k.variant()).symbol; }

Outcome synthesis_exactness() {
  Outcome o;
  const Kernel k = synthesize_kernel(Averager::centered_box(1), 4);
  const double expected[] = {11.0 / 12.0, 5.0 / 24.0, -1.0 / 6.0, 1.0 / 24.0};
  double diff = 0.0;
  for (int l = 0; l < 4; ++l) diff = std::max(diff, std::abs(symbol_of(k).coefficient({l}) - cplx(expected[l], 0.0)));
  std::size_t nonzero = 0;
  for (const auto& [l, c] : symbol_of(k).coefficients())
    if (std::abs(c) > 1e-12) ++nonzero;
  o.require(diff < 1e-12 && nonzero == 4, "d=1 coefficients diff " + fmt("%.2e", diff));
  const Kernel k2 = synthesize_kernel(Averager::centered_box(2), 4);
  const double c0 = symbol_of(k2).coefficient({0, 0}).real();
  o.require(std::abs(c0 - 5.0 / 6.0) < 1e-12, "d=2 constant " + fmt("%.15g", c0));
  return o;
}

Outcome defect_oracle() {
  Outcome o;
  int checked = 0;
  double worst = 0.0;
  double weakest_next = std::numeric_limits<double>::infinity();
  auto check = [&](const std::string& label, const std::function<double(int)>& defect, int n, bool sharp) {
    const double d = defect(n);
    worst = std::max(worst, d);
    bool ok = d < 1e-8;
    if (sharp) {
      const double next = defect(n + 1);
      weakest_next = std::min(weakest_next, next);
      ok = ok && next > 1e-4;
    }
    ++checked;
    if (!ok) o.require(false, label + " n=" + std::to_string(n));
  };
  const Averager box1 = Averager::centered_box(1);
  const Averager box2 = Averager::centered_box(2);
  const Averager ball = Averager::ball(2, 1.0);
  for (int n = 1; n <= 4; ++n) {
    // A symmetric pair has vanishing odd-order terms, so order n+1 is free when n is odd and T = 1.
    for (const auto& [label, a] : {std::pair{"box d=1", box1}, {"box d=2", box2}, {"ball d=2", ball}}) {
      const Kernel k = synthesize_kernel(a, n);
      check(label, [&](int m) { return moment_defect(k, a, m); }, n, !(n == 1 && a.is_symmetric()));
    }
    for (double delta : {0.5, 1.0}) {
      const Kernel br = Kernel::bochner_riesz(2, delta);
      for (const auto& base : {box2, ball}) {
        const Averager a = synthesize_averager(br, base, n);
        check("bochner-riesz " + fmt("%g", delta) + " " + base.name(), [&](int m) { return moment_defect(br, a, m); },
              n, !(n == 1 && a.is_symmetric()));
      }
    }
  }
  o.require(true, std::to_string(checked) + " pairs, max defect " + fmt("%.2e", worst) + ", min next-order " +
                      fmt("%.2e", weakest_next));
  return o;
}

Outcome reproduction() {
  Outcome o;
  const QuadratureSpec q;  // Gauss-Legendre 24 nodes
  const TruncationPolicy trunc;  // radius 64
  const auto& f = corpus_function("sinc2_quarter");
  const EvalGrid grid(interval(-4.0, 4.0), 257);
  const auto r = quasi_projection(f, Kernel::sinc(1), Averager::sinc(1), DilationMatrix::scalar(2.0), 1, grid, trunc, q);
  const double e1 = max_abs_diff(r, sample(f, grid));
  o.require(e1 < 1e-6, "d=1 max error " + fmt("%.2e", e1));
  const auto& f2 = corpus_function("sinc2_quarter_2d");
  const EvalGrid grid2(square(-4.0, 4.0), 33);
  const auto r2 =
      quasi_projection(f2, Kernel::sinc(2), Averager::sinc(2), DilationMatrix::scalar(2.0, 2), 1, grid2, trunc, q);
  const double e2 = max_abs_diff(r2, sample(f2, grid2));
  o.require(e2 < 1e-6, "d=2 max error " + fmt("%.2e", e2));
  return o;
}

ConvergenceReport run(ConvergencePlan plan) { return run_convergence(plan); }

Outcome convergence_orders() {
  Outcome o;
  ConvergencePlan a;
  a.f = corpus_function("gaussian");
  a.window = interval(-4.0, 4.0);
  a.averager = Averager::box(Vec::Constant(1, 0.0), Vec::Constant(1, 1.0));
  a.modulus_order = 1;
  const double sa = run(a).fitted_order;
  o.require(std::abs(sa - 1.0) <= 0.25, "a " + fmt("%.3f", sa));

  ConvergencePlan b = a;
  b.averager = Averager::centered_box(1);
  b.modulus_order = 2;
  const double sb = run(b).fitted_order;
  o.require(std::abs(sb - 2.0) <= 0.3, "b " + fmt("%.3f", sb));

  ConvergencePlan c = b;
  c.phi = synthesize_kernel(c.averager, 4);
  c.modulus_order = 4;
  const double sc = run(c).fitted_order;
  o.require(std::abs(sc - 4.0) <= 0.5, "c " + fmt("%.3f", sc));

  ConvergencePlan d;
  d.f = corpus_function("gaussian2d");
  d.window = square(-4.0, 4.0);
  d.m = DilationMatrix::quincunx();
  d.phi = Kernel::sinc(2);
  d.averager = Averager::centered_box(2);
  d.points_per_cell = 2.0;
  d.min_points_per_axis = 32;
  const double sd = run(d).fitted_order;
  o.require(std::abs(sd - 2.0) <= 0.4, "d " + fmt("%.3f", sd));
  return o;
}

Outcome discontinuous_target() {
  Outcome o;
  ConvergencePlan p;
  p.f = corpus_function("indicator_unit");
  p.window = interval(-3.0, 4.0);
  p.j_min = 3;
  p.j_max = 8;
  p.modulus_order = 1;
  const auto r = run(p);
  o.require(std::abs(r.fitted_order - 0.5) <= 0.15, "slope " + fmt("%.3f", r.fitted_order));
  o.require(r.bound_consistent(), "error/modulus ratio spread " + fmt("%.3f", r.consistency_ratio) + ", C " +
                                        fmt("%.3g", r.constant_C));
  return o;
}

Outcome fejer_kernel() {
  Outcome o;
  ConvergencePlan p;
  p.f = corpus_function("cusp");
  p.window = interval(-2.0, 2.0);
  p.phi = Kernel::sinc_squared(1, 2.0);
  p.modulus_order = 1;
  for (double pp : {1.0, std::numeric_limits<double>::infinity()}) {
    p.p = pp;
    const double s = run(p).fitted_order;
    o.require(std::abs(s - 1.0) <= 0.3, "p=" + fmt("%g", pp) + " slope " + fmt("%.3f", s));
  }
  return o;
}

Outcome modulus_properties() {
  Outcome o;
  int runs = 0;
  int failures = 0;
  const std::vector<std::string> ids = {"gaussian", "indicator_unit", "cusp", "sinc2_quarter", "sinc"};
  const EvalGrid grid(interval(-4.0, 4.0), 1024);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& f = corpus_function(ids[i]);
    const auto& g = corpus_function(ids[(i + 1) % ids.size()]);
    for (int n : {1, 2, 4})
      for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        for (double h : {0.5, 0.125}) {
          const auto rep = modulus_properties_check(f, g, n, h, 2.0, p, grid);
          ++runs;
          if (!rep.passed()) {
            ++failures;
            o.require(false, ids[i] + " n=" + std::to_string(n) + " p=" + fmt("%g", p));
          }
        }
  }
  o.require(failures == 0, std::to_string(runs) + " checks");
  return o;
}

Outcome route_equivalence() {
  Outcome o;
  const auto& f = corpus_function("gaussian");
  const auto m = DilationMatrix::scalar(2.0);
  const EvalGrid grid(interval(-3.0, 3.0), 97);
  for (int j : {2, 3}) {
    const auto a = fourier_side_projection(f, m, j, grid, TruncationPolicy{}, QuadratureSpec{});
    const auto b = quasi_projection(f, Kernel::sinc(1), Averager::sinc(1), m, j, grid, TruncationPolicy{},
                                    QuadratureSpec{});
    const double diff = max_abs_diff(a, b);
    o.require(diff < 1e-7, "j=" + std::to_string(j) + " diff " + fmt("%.2e", diff));
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& out_dir) {
  Outcome o;
  const auto config = cli::Config::from_string(
      "[run]\nfunction = indicator_unit\nj_min = 3\nj_max = 6\n[grid]\nlower = -2\nupper = 3\n");
  const std::filesystem::path first = std::filesystem::path(out_dir) / "run1";
  const std::filesystem::path second = std::filesystem::path(out_dir) / "run2";
  cli::cmd_converge(config, first.string());
  cli::cmd_converge(config, second.string());
  const std::string a = slurp(first / "converge.csv");
  const std::string b = slurp(second / "converge.csv");
  o.require(!a.empty() && a == b, std::to_string(a.size()) + " bytes");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "acceptance_out";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 synthesis exactness", synthesis_exactness},
      {"2 moment-defect oracle", defect_oracle},
      {"3 exact reproduction", reproduction},
      {"4 convergence orders", convergence_orders},
      {"5 discontinuous target", discontinuous_target},
      {"6 fejer kernel p=1,inf", fejer_kernel},
      {"7 modulus properties", modulus_properties},
      {"8 fourier-side route", route_equivalence},
      {"9 determinism", [&] { return determinism(out_dir); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
