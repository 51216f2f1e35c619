#pragma once

#include <functional>
#include <map>
#include <vector>

#include "kksampling/averager.hpp"
#include "kksampling/kernel.hpp"
#include "kksampling/trig_polynomial.hpp"
#include "kksampling/types.hpp"

namespace kks {

/// Largest approximation order accepted by make_g and the synthesis routines.
inline constexpr int kMaxOrder = 8;

/// Default certificate threshold for max |D^beta(1 - phi-hat conj(phi-tilde-hat))(0)|.
inline constexpr double kDefectTolerance = 1e-8;

/// Mixed partial derivatives D^alpha s(0) of a symbol for all [alpha] < order.
struct MomentTable {
  int order = 1;
  int dim = 1;
  std::map<MultiIndex, cplx> derivs;

  cplx at(const MultiIndex& alpha) const;
};

/// All multi-indices in Z^dim_+ with [alpha] < n, ordered by total degree,
/// then by descending first coordinate: (1,0) before (0,1).
std::vector<MultiIndex> multi_indices_below(int dim, int n);

using Symbol = std::function<cplx(const Vec&)>;
using AnalyticSymbol = std::function<cplx(const CVec&)>;

struct RichardsonOptions {
  double base_step = 1.0 / 64.0;
  int levels = 2;
  /// Non-convergence is reported when the last two levels differ by more.
  double agreement_tol = 1e-6;
};

/// Nested central differences with Richardson extrapolation on a real-argument symbol.
/// Throws NonConvergence when the extrapolation levels disagree.
MomentTable moment_table(const Symbol& symbol, int dim, int n, const RichardsonOptions& opts = {});

struct ContourOptions {
  double radius = 0.25;
  int points = 32;
};

/// Cauchy-integral derivatives of an analytic symbol: trapezoidal rule on the
/// torus |xi_nu| = radius. Spectrally accurate for entire symbols.
MomentTable moment_table_contour(const AnalyticSymbol& symbol, int dim, int n,
                                 const ContourOptions& opts = {});

/// Closed-form Taylor data (box and ball moments, combination Leibniz rule).
MomentTable moment_table(const Averager& averager, int n);
/// Closed-form Taylor data (trig polynomial, binomial series).
MomentTable moment_table(const Kernel& kernel, int n);

/// 1-D trigonometric polynomial with exponents {0, ..., n-1} whose derivatives
/// satisfy g_k^{(m)}(0) = delta_{km} for m < n.
///
/// The Vandermonde system in the nodes 2 pi i l is solved exactly: the
/// coefficients are rational multiples of (2 pi i)^{-k}, taken from the
/// Lagrange basis on {0, ..., n-1}.
TrigPolynomial make_g(int k, int n);

using CoefficientMap = std::map<MultiIndex, cplx>;

/// c_0 = 1 and sum_{alpha <= beta} binom(beta, alpha) conj(D^{beta-alpha} a(0)) c_alpha = 0
/// for 0 < [beta] < n, solved by induction on [beta].
CoefficientMap solve_T(const MomentTable& averager_table, int n);

/// T(xi) = sum_alpha c_alpha prod_nu g_{alpha_nu}(xi_nu). Throws IllConditioned if
/// the assembled polynomial does not reproduce D^alpha T(0) = c_alpha.
TrigPolynomial assemble_T(const CoefficientMap& c, int dim, int n);

/// Sinc combination of approximation order n with respect to the averager.
/// Throws DefectCheckFailed when the post-hoc certificate fails.
Kernel synthesize_kernel(const Averager& averager, int n);

/// Shift polynomial Q for a combination of averagers matched to a kernel.
TrigPolynomial solve_Q(const MomentTable& kernel_table, const MomentTable& averager_table, int n);

/// The shifted combination sum_l b_l base(x + l) of approximation order n for phi.
Averager synthesize_averager(const Kernel& kernel, const Averager& base, int n);

/// max_{[beta] < n} |D^beta (1 - phi-hat conj(phi-tilde-hat))(0)|, via contour integrals.
double moment_defect(const AnalyticSymbol& phi_hat, const AnalyticSymbol& phi_tilde_hat, int dim, int n,
                     const ContourOptions& opts = {});
double moment_defect(const Kernel& kernel, const Averager& averager, int n, const ContourOptions& opts = {});
double moment_defect(const Kernel& kernel, const Kernel& analysis, int n, const ContourOptions& opts = {});

/// Threshold used by the synthesis post-hoc check: kDefectTolerance, widened
/// only when the kernel's own derivative magnitudes make it unreachable in
/// double precision (orders above five).
double defect_tolerance(const Kernel& kernel, int n);

/// conj(phi-hat) phi-tilde-hat = 1 on {|xi| < delta} and phi-hat = 0 on
/// {|l - xi| < delta} for the 3^d - 1 nearest nonzero lattice points l, checked on a
/// grid with `points_per_axis` cell-centred points per axis.
bool check_strict_compatibility(const Symbol& phi_hat, const Symbol& phi_tilde_hat, int dim, double delta,
                                int points_per_axis = 64, double tol = 1e-10);
bool check_strict_compatibility(const Kernel& kernel, const Averager& averager, double delta);
bool check_strict_compatibility(const Kernel& kernel, const Kernel& analysis, double delta);

}  // namespace kks
