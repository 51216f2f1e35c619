#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kksampling/averager.hpp"
#include "kksampling/dilation.hpp"
#include "kksampling/kernel.hpp"
#include "kksampling/operators.hpp"
#include "kksampling/quadrature.hpp"
#include "kksampling/test_function.hpp"

namespace kks {

/// Shortest decimal string that parses back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double v);

/// Riemann-sum L_p norm (cell measure * sum |v|^p)^{1/p}; max |v| for p = infinity.
double lp_norm(const std::vector<double>& values, const EvalGrid& grid, double p);
double lp_norm(const GridValues& g, double p);
/// Throws GeometryMismatch unless both grids share window and resolution.
double lp_distance(const GridValues& a, const GridValues& b, double p);

/// Step sampling for the modulus estimator: `radii` equally spaced lengths
/// h i / radii (i = 1..radii) and, for d = 2, `directions` angles in [0, pi).
struct DeltaSampling {
  int radii = 16;
  int directions = 8;
};

std::vector<Vec> delta_set(int dim, double h, const DeltaSampling& sampling = {});

/// Grid L_p norm of Delta_delta^n f for every delta in the list.
std::vector<double> difference_norms(const TestFunction& f, int n, const std::vector<Vec>& deltas, double p,
                                     const EvalGrid& grid);

/// max over delta_set(h) of ||Delta_delta^n f||_p on the grid: a lower
/// estimate of omega_n(f, h)_p that converges under refinement.
double modulus_of_smoothness(const TestFunction& f, int n, double h, double p, const EvalGrid& grid,
                             const DeltaSampling& sampling = {});

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
};

/// Least-squares slope of log2 error against log2 scale. Rows whose error
/// is at or below `floors[i]` (when given) are excluded; at least three must remain.
FitResult fit_order(const std::vector<std::pair<double, double>>& rows, const std::vector<double>& floors = {});

/// Outcome of the modulus property checks on shared delta sets.
struct ModulusPropertyReport {
  int n = 1;
  double h = 0.0;
  double lambda = 1.0;
  double omega_f = 0.0;
  double omega_g = 0.0;
  double omega_sum = 0.0;
  /// max over the sampled shifts of the grid norm of f(. + nu delta).
  double norm_f = 0.0;
  double omega_f_scaled = 0.0;
  bool subadditive = false;
  bool bounded = false;
  bool dilation = false;

  bool passed() const { return subadditive && bounded && dilation; }
};

/// (i) omega_n(f + g) <= omega_n(f) + omega_n(g), (ii) omega_n(f) <= 2^n ||f||_p,
/// (iii) omega_n(f, lambda h) <= (1 + lambda)^n omega_n(f, h). The lambda h set
/// keeps the step h / radii, so it contains the h set. (i) and (ii) are exact
/// on these sets; (iii) allows `dilation_tol` relative slack for the sampled sup.
ModulusPropertyReport modulus_properties_check(const TestFunction& f, const TestFunction& g, int n, double h,
                                               double lambda, double p, const EvalGrid& grid,
                                               const DeltaSampling& sampling = {}, double dilation_tol = 0.05);

enum class OperatorKind { quasi_projection, kantorovich, sampling, fourier_side };

std::string to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

/// Everything needed for one convergence sweep over levels j.
struct ConvergencePlan {
  OperatorKind op = OperatorKind::quasi_projection;
  TestFunction f;
  Kernel phi = Kernel::sinc(1);
  Averager averager = Averager::centered_box(1);
  DilationMatrix m = DilationMatrix::scalar(2.0);
  int j_min = 3;
  int j_max = 7;
  double p = 2.0;
  Box window;
  /// Grid points per axis per unit length of the level-j cell ||M^{-j}||.
  double points_per_cell = 8.0;
  int min_points_per_axis = 64;
  TruncationPolicy trunc;
  QuadratureSpec q;
  int modulus_order = 2;
  DeltaSampling sampling;
  /// Resolved configuration echoed into the CSV comment block.
  std::vector<std::pair<std::string, std::string>> config;
};

struct ConvergenceRow {
  int j = 0;
  double scale = 0.0;
  double error = 0.0;
  /// error_{j-1} / error_j; NaN on the first row.
  double ratio = 0.0;
  double modulus = 0.0;
  double budget = 0.0;
};

/// Ratio max/min of error / modulus across rows below which a run counts as
/// consistent with a single-constant bound error <= C omega_n.
inline constexpr double kConsistencyRatio = 4.0;

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double fitted_order = 0.0;
  /// max_j error_j / omega_n(f, ||M^{-j}||)_p.
  double constant_C = 0.0;
  /// max_j / min_j of error_j / omega_n(f, ||M^{-j}||)_p.
  double consistency_ratio = 0.0;
  double budget = 0.0;
  std::vector<std::pair<std::string, std::string>> config;

  bool bound_consistent() const { return consistency_ratio <= kConsistencyRatio; }
  /// Comment block with the configuration, header row, one line per level.
  std::string to_csv() const;
  /// {fitted_order, constant_C, consistency_ratio, bound_consistent, budget}.
  nlohmann::json summary() const;
};

/// Grid for level j of a plan.
EvalGrid level_grid(const ConvergencePlan& plan, int j);

/// Runs the operator for every j in [j_min, j_max] and measures the L_p error
/// against f on the window.
ConvergenceReport run_convergence(const ConvergencePlan& plan);

}  // namespace kks
