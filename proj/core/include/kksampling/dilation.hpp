#pragma once

#include <vector>

#include "kksampling/types.hpp"

namespace kks {

/// An expansive real d x d matrix M (every eigenvalue has modulus > 1).
///
/// Powers M^j for |j| <= max_cached_power are computed once at construction,
/// so operator evaluation can map lattice points in O(1). The object is
/// immutable afterwards and safe to share between threads.
class DilationMatrix {
 public:
  /// Eigenvalues with modulus <= 1 + kExpansiveTolerance are rejected.
  static constexpr double kExpansiveTolerance = 1e-9;

  explicit DilationMatrix(const Mat& entries, int max_cached_power = 16);

  /// Row-major construction, as read from config files.
  static DilationMatrix from_rows(int dim, const std::vector<double>& row_major,
                                  int max_cached_power = 16);
  static DilationMatrix scalar(double w, int dim = 1);
  /// The 2 x 2 quincunx matrix [[1, -1], [1, 1]].
  static DilationMatrix quincunx();

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Mat& entries() const { return entries_; }
  /// m = |det M|.
  double det_abs() const { return det_abs_; }
  const std::vector<cplx>& eigenvalues() const { return eigenvalues_; }
  /// Smallest eigenvalue modulus; any 1 < theta < this bounds ||M^{-j}|| <= C theta^{-j}.
  double min_eigen_modulus() const;
  bool is_diagonal() const { return diagonal_; }
  int max_cached_power() const { return max_cached_power_; }

  /// M^j for any integer j (negative j uses the inverse).
  Mat power(int j) const;
  /// (M^T)^j, the adjoint power M*^j.
  Mat adjoint_power(int j) const { return power(j).transpose(); }
  Vec apply_power(int j, const Vec& x) const { return power(j) * x; }

  /// Spectral norm ||M^{-j}|| (largest singular value of the inverse power), j >= 0.
  double inv_power_norm(int j) const;

 private:
  Mat entries_;
  Mat inverse_;
  double det_abs_ = 0.0;
  std::vector<cplx> eigenvalues_;
  bool diagonal_ = false;
  int max_cached_power_ = 16;
  std::vector<Mat> positive_powers_;
  std::vector<Mat> negative_powers_;
};

/// Largest singular value; closed forms for d <= 2, Jacobi SVD otherwise.
double spectral_norm(const Mat& a);

/// Eigenvalues; closed forms for d <= 2, Eigen::EigenSolver otherwise.
std::vector<cplx> eigenvalues(const Mat& a);

}  // namespace kks
