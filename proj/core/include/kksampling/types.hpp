#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace kks {

/// Upper bound on the spatial dimension. Vectors and matrices use
/// fixed-capacity Eigen storage so hot loops never allocate.
inline constexpr int kMaxDim = 4;

using cplx = std::complex<double>;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using IVec = Eigen::Matrix<long, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Integer lattice point used as an ordered map key (shift l or index k).
using LatticePoint = std::vector<int>;

/// Multi-index alpha in Z^d_+; [alpha] is the sum of its entries.
using MultiIndex = std::vector<int>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline Vec to_vec(const LatticePoint& l) {
  Vec v(static_cast<Eigen::Index>(l.size()));
  for (std::size_t i = 0; i < l.size(); ++i) v[static_cast<Eigen::Index>(i)] = l[i];
  return v;
}

inline int total_degree(const MultiIndex& alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

}  // namespace kks
