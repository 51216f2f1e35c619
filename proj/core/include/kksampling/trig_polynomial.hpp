#pragma once

#include <map>

#include <nlohmann/json.hpp>

#include "kksampling/types.hpp"

namespace kks {

/// Finite sum T(xi) = sum_l a_l exp(2 pi i (l, xi)) over lattice points l in Z^d.
///
/// Coefficients live in an ordered map so iteration, serialization and
/// arithmetic are deterministic. T is 1-periodic in every coordinate.
class TrigPolynomial {
 public:
  using CoefficientMap = std::map<LatticePoint, cplx>;

  explicit TrigPolynomial(int dim = 1);
  TrigPolynomial(int dim, CoefficientMap coeffs);

  static TrigPolynomial constant(int dim, cplx value);
  /// Embeds a 1-D polynomial along `axis` of a d-dimensional lattice.
  static TrigPolynomial embed(const TrigPolynomial& one_dim, int axis, int dim);

  int dim() const { return dim_; }
  const CoefficientMap& coefficients() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient a_l, zero when l is not in the support.
  cplx coefficient(const LatticePoint& l) const;
  void add(const LatticePoint& l, cplx a);

  cplx operator()(const Vec& xi) const;
  /// Evaluation at complex xi (analytic continuation).
  cplx operator()(const CVec& xi) const;

  /// D^alpha T(0) = sum_l a_l prod_nu (2 pi i l_nu)^{alpha_nu}.
  cplx derivative_at_zero(const MultiIndex& alpha) const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(cplx s);
  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator*(TrigPolynomial a, cplx s) { return a *= s; }
  friend TrigPolynomial operator*(cplx s, TrigPolynomial a) { return a *= s; }
  /// Product of trigonometric polynomials (convolution of coefficients).
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

  /// Removes coefficients with |a_l| <= tol.
  void prune(double tol);
  /// Largest |Im a_l|.
  double max_imag() const;

 private:
  int dim_;
  CoefficientMap coeffs_;
};

/// Coefficient rows [l_1, ..., l_d, re, im]; doubles round-trip bit-exactly.
nlohmann::json coefficients_to_json(const TrigPolynomial& t);
TrigPolynomial coefficients_from_json(int dim, const nlohmann::json& rows);

}  // namespace kks
