#include "kksampling/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "kksampling/errors.hpp"
#include "kksampling/parallel.hpp"

namespace kks {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double lp_norm(const std::vector<double>& values, const EvalGrid& grid, double p) {
  if (values.size() != grid.size()) throw GeometryMismatch("value count does not match the grid");
  if (!(p >= 1.0)) throw InvalidArgument("p must be at least 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(grid.cell_measure() * sum, 1.0 / p);
}

double lp_norm(const GridValues& g, double p) { return lp_norm(g.values, g.grid, p); }

double lp_distance(const GridValues& a, const GridValues& b, double p) {
  if (!a.grid.same_geometry(b.grid) || a.values.size() != b.values.size())
    throw GeometryMismatch("grids do not share geometry");
  std::vector<double> diff(a.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.values[i] - b.values[i];
  return lp_norm(diff, a.grid, p);
}

std::vector<Vec> delta_set(int dim, double h, const DeltaSampling& sampling) {
  if (!(h > 0.0)) throw InvalidArgument("modulus step h must be positive");
  if (sampling.radii < 1 || sampling.directions < 1) throw InvalidArgument("delta sampling counts must be positive");
  std::vector<Vec> out;
  for (int i = 1; i <= sampling.radii; ++i) {
    const double r = h * i / sampling.radii;
    if (dim == 1) {
      out.push_back(Vec::Constant(1, r));
      continue;
    }
    if (dim != 2) throw InvalidArgument("delta sets are defined for d = 1 and d = 2");
    for (int t = 0; t < sampling.directions; ++t) {
      const double th = kPi * t / sampling.directions;
      Vec d(2);
      d << r * std::cos(th), r * std::sin(th);
      out.push_back(d);
    }
  }
  return out;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i) / (i + 1.0);
  return r;
}

// Grid norms of f(. + nu delta) for nu = 0..n and every delta.
double shifted_norm_max(const TestFunction& f, int n, const std::vector<Vec>& deltas, double p,
                        const EvalGrid& grid) {
  std::vector<double> best(deltas.size(), 0.0);
  parallel_for(deltas.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> vals(grid.size());
    for (std::size_t d = b; d < e; ++d)
      for (int nu = 0; nu <= n; ++nu) {
        for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f.eval(grid.point(i) + nu * deltas[d]);
        best[d] = std::max(best[d], lp_norm(vals, grid, p));
      }
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace

std::vector<double> difference_norms(const TestFunction& f, int n, const std::vector<Vec>& deltas, double p,
                                     const EvalGrid& grid) {
  if (n < 1) throw InvalidArgument("modulus order must be positive");
  if (f.dim != grid.dim()) throw InvalidArgument("function and grid differ in dimension");
  std::vector<double> coef(static_cast<std::size_t>(n) + 1);
  for (int nu = 0; nu <= n; ++nu) coef[static_cast<std::size_t>(nu)] = ((nu % 2) ? -1.0 : 1.0) * binomial(n, nu);
  std::vector<double> norms(deltas.size(), 0.0);
  parallel_for(deltas.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> vals(grid.size());
    for (std::size_t d = b; d < e; ++d) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec x = grid.point(i);
        double s = 0.0;
        for (int nu = 0; nu <= n; ++nu) s += coef[static_cast<std::size_t>(nu)] * f.eval(x + nu * deltas[d]);
        vals[i] = s;
      }
      norms[d] = lp_norm(vals, grid, p);
    }
  });
  return norms;
}

double modulus_of_smoothness(const TestFunction& f, int n, double h, double p, const EvalGrid& grid,
                             const DeltaSampling& sampling) {
  const auto norms = difference_norms(f, n, delta_set(f.dim, h, sampling), p, grid);
  return *std::max_element(norms.begin(), norms.end());
}

FitResult fit_order(const std::vector<std::pair<double, double>>& rows, const std::vector<double>& floors) {
  if (!floors.empty() && floors.size() != rows.size()) throw InvalidArgument("floors must match the rows");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [scale, error] = rows[i];
    if (!(scale > 0.0) || !(error > 0.0) || !std::isfinite(error)) continue;
    if (!floors.empty() && error <= floors[i]) continue;
    xs.push_back(std::log2(scale));
    ys.push_back(std::log2(error));
  }
  if (xs.size() < 3) throw InvalidArgument("fit_order needs at least three usable rows");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_order needs distinct scales");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.used = xs.size();
  return r;
}

ModulusPropertyReport modulus_properties_check(const TestFunction& f, const TestFunction& g, int n, double h,
                                               double lambda, double p, const EvalGrid& grid,
                                               const DeltaSampling& sampling, double dilation_tol) {
  if (!(lambda >= 1.0)) throw InvalidArgument("lambda must be at least 1");
  ModulusPropertyReport r;
  r.n = n;
  r.h = h;
  r.lambda = lambda;
  const auto deltas = delta_set(f.dim, h, sampling);
  const double rel = 1e-12;

  const auto nf = difference_norms(f, n, deltas, p, grid);
  const auto ng = difference_norms(g, n, deltas, p, grid);
  const auto nfg = difference_norms(linear_combination(1.0, f, 1.0, g), n, deltas, p, grid);
  r.omega_f = *std::max_element(nf.begin(), nf.end());
  r.omega_g = *std::max_element(ng.begin(), ng.end());
  r.omega_sum = *std::max_element(nfg.begin(), nfg.end());
  r.subadditive = r.omega_sum <= (r.omega_f + r.omega_g) * (1.0 + rel) + 1e-300;

  r.norm_f = shifted_norm_max(f, n, deltas, p, grid);
  r.bounded = r.omega_f <= std::pow(2.0, n) * r.norm_f * (1.0 + rel);

  // Same step h / radii, extended to lambda h.
  DeltaSampling wide = sampling;
  wide.radii = static_cast<int>(std::ceil(lambda * sampling.radii - 1e-9));
  const double reach = h * wide.radii / sampling.radii;
  const auto nfl = difference_norms(f, n, delta_set(f.dim, reach, wide), p, grid);
  r.omega_f_scaled = *std::max_element(nfl.begin(), nfl.end());
  r.dilation = r.omega_f_scaled <= std::pow(1.0 + lambda, n) * r.omega_f * (1.0 + dilation_tol) + 1e-300;
  return r;
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::quasi_projection:
      return "quasi_projection";
    case OperatorKind::kantorovich:
      return "kantorovich";
    case OperatorKind::sampling:
      return "sampling";
    case OperatorKind::fourier_side:
      return "fourier_side";
  }
  return "quasi_projection";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "quasi_projection") return OperatorKind::quasi_projection;
  if (s == "kantorovich") return OperatorKind::kantorovich;
  if (s == "sampling") return OperatorKind::sampling;
  if (s == "fourier_side") return OperatorKind::fourier_side;
  throw InvalidArgument("unknown operator '" + s + "'");
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream out;
  for (const auto& [key, value] : config) out << "# " << key << " = " << value << "\n";
  out << "j,scale,error,ratio,modulus,budget\n";
  for (const auto& r : rows) {
    out << r.j << "," << format_double(r.scale) << "," << format_double(r.error) << "," << format_double(r.ratio)
        << "," << format_double(r.modulus) << "," << format_double(r.budget) << "\n";
  }
  return out.str();
}

nlohmann::json ConvergenceReport::summary() const {
  return {{"fitted_order", fitted_order},
          {"constant_C", constant_C},
          {"consistency_ratio", consistency_ratio},
          {"bound_consistent", bound_consistent()},
          {"budget", budget}};
}

EvalGrid level_grid(const ConvergencePlan& plan, int j) {
  const double cell = plan.m.inv_power_norm(j);
  double width = 0.0;
  for (int v = 0; v < plan.window.dim(); ++v) width = std::max(width, plan.window.upper[v] - plan.window.lower[v]);
  const int points = std::max(plan.min_points_per_axis, static_cast<int>(std::ceil(width * plan.points_per_cell / cell)));
  return EvalGrid(plan.window, points);
}

ConvergenceReport run_convergence(const ConvergencePlan& plan) {
  if (plan.j_max < plan.j_min || plan.j_min < 0) throw InvalidArgument("invalid j range");
  if (plan.window.dim() != plan.f.dim) throw InvalidArgument("window and function differ in dimension");
  ConvergenceReport report;
  report.config = plan.config;
  for (int j = plan.j_min; j <= plan.j_max; ++j) {
    const EvalGrid grid = level_grid(plan, j);
    GridValues approx = [&] {
      switch (plan.op) {
        case OperatorKind::kantorovich:
          return kantorovich_1d(plan.f, std::pow(plan.m.entries()(0, 0), j), plan.phi, grid, plan.trunc, plan.q);
        case OperatorKind::sampling:
          return generalized_sampling(plan.f, std::pow(plan.m.entries()(0, 0), j), plan.phi, grid, plan.trunc);
        case OperatorKind::fourier_side:
          return fourier_side_projection(plan.f, plan.m, j, grid, plan.trunc, plan.q);
        case OperatorKind::quasi_projection:
          break;
      }
      return quasi_projection(plan.f, plan.phi, plan.averager, plan.m, j, grid, plan.trunc, plan.q);
    }();
    const GridValues exact = sample(plan.f, grid);
    ConvergenceRow row;
    row.j = j;
    row.scale = plan.m.inv_power_norm(j);
    row.error = lp_distance(approx, exact, plan.p);
    row.ratio = report.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : report.rows.back().error / row.error;
    row.modulus = modulus_of_smoothness(plan.f, plan.modulus_order, row.scale, plan.p, grid, plan.sampling);
    row.budget = approx.budget.total();
    report.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> pts;
  std::vector<double> floors;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : report.rows) {
    pts.emplace_back(r.scale, r.error);
    floors.push_back(r.budget);
    report.budget = std::max(report.budget, r.budget);
    if (r.modulus > 0.0) {
      const double c = r.error / r.modulus;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  report.fitted_order = pts.size() >= 3 ? fit_order(pts, floors).slope : std::numeric_limits<double>::quiet_NaN();
  report.constant_C = hi;
  report.consistency_ratio = hi > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace kks
