#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kksampling/averager.hpp"
#include "kksampling/dilation.hpp"
#include "kksampling/kernel.hpp"
#include "kksampling/quadrature.hpp"
#include "kksampling/test_function.hpp"

namespace kks {

/// Cell-centred uniform grid on an axis-aligned window: along each axis the
/// points are lower + (i + 1/2) h with h = (upper - lower) / points_per_axis.
/// Flat indices run with the last axis fastest.
class EvalGrid {
 public:
  EvalGrid(Box window, int points_per_axis);

  int dim() const { return window_.dim(); }
  const Box& window() const { return window_; }
  int points_per_axis() const { return points_per_axis_; }
  std::size_t size() const { return size_; }
  Vec spacing() const;
  double cell_measure() const;
  Vec point(std::size_t flat) const;
  bool same_geometry(const EvalGrid& other) const;

 private:
  Box window_;
  int points_per_axis_;
  std::size_t size_;
};

enum class TruncationMode { radius, tail_tol };

std::string to_string(TruncationMode m);
TruncationMode truncation_mode_from_string(const std::string& s);

/// Lattice-sum truncation. The index set holds every k with
/// |M^j x + k|_inf <= radius for some x in the window, so all grid points share
/// one set. In tail_tol mode the smallest coefficients are then dropped while
/// their summed bound sup|phi| sum |c_k| stays below tail_tol.
struct TruncationPolicy {
  TruncationMode mode = TruncationMode::radius;
  double radius = 64.0;
  double tail_tol = 1e-10;
  std::size_t cap = 4'000'000;

  void validate() const;
};

/// Error record attached to every operator output.
struct ErrorBudget {
  /// Largest coefficient change under a refined rule (sampled), times the Lebesgue sum.
  double quadrature = 0.0;
  /// Bound on the coefficients dropped in tail_tol mode.
  double truncation = 0.0;
  /// Estimate of the error from truncating the lattice sum: the largest
  /// contribution of the outer half of the index set on a coarse grid.
  double outer_tail = 0.0;
  /// max over grid points of sum_k |phi(M^j x + k)|.
  double lebesgue = 0.0;
  /// Largest imaginary part discarded from the output (complex kernels).
  double imag_residual = 0.0;
  std::size_t lattice_points = 0;

  double total() const { return quadrature + truncation + outer_tail; }
};

struct GridValues {
  EvalGrid grid;
  std::vector<double> values;
  ErrorBudget budget;
};

/// f sampled on the grid.
GridValues sample(const TestFunction& f, const EvalGrid& grid);

/// Q_j f(x) = sum_k c_jk(f) phi(M^j x + k).
GridValues quasi_projection(const TestFunction& f, const Kernel& phi, const Averager& averager,
                            const DilationMatrix& m, int j, const EvalGrid& grid, const TruncationPolicy& trunc,
                            const QuadratureSpec& q);

/// K_w f(x) = sum_k (w integral over [k/w, (k+1)/w] of f) phi(w x - k), d = 1.
/// `cell_offset` shifts every averaging cell (time-jitter experiments).
GridValues kantorovich_1d(const TestFunction& f, double w, const Kernel& phi, const EvalGrid& grid,
                          const TruncationPolicy& trunc, const QuadratureSpec& q = {}, double cell_offset = 0.0);

/// S_w f(x) = sum_k f(k/w + sample_offset) phi(w x - k), d = 1.
GridValues generalized_sampling(const TestFunction& f, double w, const Kernel& phi, const EvalGrid& grid,
                                const TruncationPolicy& trunc, double sample_offset = 0.0);

/// sum_k fourier_coefficient(fhat, M, j, k) sinc(M^j x + k).
GridValues fourier_side_projection(const std::function<cplx(const Vec&)>& fhat, const DilationMatrix& m, int j,
                                   const EvalGrid& grid, const TruncationPolicy& trunc, const QuadratureSpec& q,
                                   const FourierHints& hints = {});
GridValues fourier_side_projection(const TestFunction& f, const DilationMatrix& m, int j, const EvalGrid& grid,
                                   const TruncationPolicy& trunc, const QuadratureSpec& q);

}  // namespace kks
