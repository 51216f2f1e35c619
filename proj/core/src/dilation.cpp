#include "kksampling/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "kksampling/errors.hpp"

namespace kks {

double spectral_norm(const Mat& a) {
  const auto d = a.rows();
  if (d == 1) return std::abs(a(0, 0));
  if (d == 2) {
    // sigma_max^2 = (F + sqrt(F^2 - 4 det^2)) / 2 with F the squared Frobenius norm.
    const double f = a.squaredNorm();
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = std::max(0.0, f * f - 4.0 * det * det);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
  const Eigen::MatrixXd dense = a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues()(0);
}

std::vector<cplx> eigenvalues(const Mat& a) {
  const auto d = a.rows();
  if (d == 1) return {cplx(a(0, 0), 0.0)};
  if (d == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx root = std::sqrt(cplx(tr * tr / 4.0 - det, 0.0));
    return {tr / 2.0 + root, tr / 2.0 - root};
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(a), false);
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

DilationMatrix::DilationMatrix(const Mat& entries, int max_cached_power)
    : entries_(entries), max_cached_power_(max_cached_power) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw InvalidArgument("dilation matrix must be square and non-empty");
  }
  if (entries.rows() > kMaxDim) {
    throw InvalidArgument("dilation matrix dimension exceeds kMaxDim");
  }
  if (!entries.allFinite()) throw InvalidArgument("dilation matrix has non-finite entries");
  if (max_cached_power < 0) throw InvalidArgument("max_cached_power must be non-negative");

  eigenvalues_ = kks::eigenvalues(entries_);
  for (const auto& lambda : eigenvalues_) {
    if (std::abs(lambda) <= 1.0 + kExpansiveTolerance) {
      std::ostringstream msg;
      msg << "non-expansive matrix: eigenvalue " << lambda.real() << (lambda.imag() < 0 ? "" : "+")
          << lambda.imag() << "i has modulus " << std::abs(lambda);
      throw NonExpansiveMatrix(msg.str());
    }
  }
  det_abs_ = std::abs(Eigen::MatrixXd(entries_).determinant());
  inverse_ = Eigen::MatrixXd(entries_).inverse();

  diagonal_ = true;
  for (Eigen::Index r = 0; r < entries_.rows(); ++r)
    for (Eigen::Index c = 0; c < entries_.cols(); ++c)
      if (r != c && entries_(r, c) != 0.0) diagonal_ = false;

  const auto d = entries_.rows();
  positive_powers_.reserve(static_cast<std::size_t>(max_cached_power) + 1);
  negative_powers_.reserve(static_cast<std::size_t>(max_cached_power) + 1);
  positive_powers_.push_back(Mat::Identity(d, d));
  negative_powers_.push_back(Mat::Identity(d, d));
  for (int j = 1; j <= max_cached_power; ++j) {
    positive_powers_.push_back(positive_powers_.back() * entries_);
    negative_powers_.push_back(negative_powers_.back() * inverse_);
  }
}

DilationMatrix DilationMatrix::from_rows(int dim, const std::vector<double>& row_major,
                                         int max_cached_power) {
  if (dim <= 0 || static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) != row_major.size()) {
    std::ostringstream msg;
    msg << "matrix needs " << dim << "x" << dim << " entries, got " << row_major.size();
    throw InvalidArgument(msg.str());
  }
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = row_major[static_cast<std::size_t>(r * dim + c)];
  return DilationMatrix(m, max_cached_power);
}

DilationMatrix DilationMatrix::scalar(double w, int dim) {
  Mat m = Mat::Identity(dim, dim) * w;
  return DilationMatrix(m);
}

DilationMatrix DilationMatrix::quincunx() {
  Mat m(2, 2);
  m << 1.0, -1.0, 1.0, 1.0;
  return DilationMatrix(m);
}

double DilationMatrix::min_eigen_modulus() const {
  double best = std::abs(eigenvalues_.front());
  for (const auto& lambda : eigenvalues_) best = std::min(best, std::abs(lambda));
  return best;
}

Mat DilationMatrix::power(int j) const {
  if (j >= 0 && j <= max_cached_power_) return positive_powers_[static_cast<std::size_t>(j)];
  if (j < 0 && -j <= max_cached_power_) return negative_powers_[static_cast<std::size_t>(-j)];
  const Mat& base = j >= 0 ? entries_ : inverse_;
  Mat result = Mat::Identity(entries_.rows(), entries_.cols());
  Mat acc = base;
  for (unsigned e = static_cast<unsigned>(j >= 0 ? j : -j); e != 0; e >>= 1) {
    if (e & 1u) result = result * acc;
    acc = acc * acc;
  }
  return result;
}

double DilationMatrix::inv_power_norm(int j) const {
  if (j < 0) throw InvalidArgument("inv_power_norm requires j >= 0");
  if (j == 0) return 1.0;
  return spectral_norm(power(-j));
}

}  // namespace kks
