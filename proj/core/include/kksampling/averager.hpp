#pragma once

#include <memory>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "kksampling/trig_polynomial.hpp"
#include "kksampling/types.hpp"

namespace kks {

/// Normalized indicator (1/mes U) chi_U of the box U = [lower, upper].
struct BoxIndicator {
  Vec lower;
  Vec upper;
};

/// Normalized indicator of the centred ball B_r (d = 1 or 2).
struct BallIndicator {
  int dim = 2;
  double radius = 1.0;
};

class Averager;

/// psi(x) = sum_l b_l base(x + l); symbol Q(xi) base-hat(xi) with
/// Q(xi) = sum_l b_l exp(2 pi i (l, xi)).
struct ShiftedCombo {
  std::shared_ptr<const Averager> base;
  TrigPolynomial shifts;
};

/// The band-limited analysis function sinc, symbol chi_{[-1/2,1/2]^d}.
/// Its coefficients are formed by Fourier pairing or by spatial quadrature
/// over the (effective) support of the sampled function.
struct SincAnalysis {
  int dim = 1;
};

/// Analysis function phi-tilde used to form the local averages c_jk(f).
class Averager {
 public:
  using Variant = std::variant<BoxIndicator, BallIndicator, ShiftedCombo, SincAnalysis>;

  static Averager box(const Vec& lower, const Vec& upper);
  /// [-1/2, 1/2]^d.
  static Averager centered_box(int dim);
  static Averager ball(int dim, double radius);
  static Averager shifted_combo(const Averager& base, TrigPolynomial shifts);
  static Averager sinc(int dim);

  const Variant& variant() const { return variant_; }
  int dim() const;
  std::string name() const;
  /// mes U of the underlying indicator (1 for SincAnalysis).
  double measure() const;
  bool compact_support() const;
  /// Radius of a Euclidean ball containing the support (infinite for sinc).
  double support_radius() const;
  bool is_symmetric() const;

  double operator()(const Vec& x) const;
  cplx fourier(const Vec& xi) const;

  /// Analytic continuation of the symbol near the origin.
  cplx germ(const CVec& xi) const;
  /// Closed-form D^alpha phi-tilde-hat(0), from the moments of U.
  cplx symbol_derivative(const MultiIndex& alpha) const;

  nlohmann::json to_json() const;
  static Averager from_json(const nlohmann::json& doc);

 private:
  explicit Averager(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// E[x^alpha] for x uniform on the box [lower, upper].
double box_moment(const Vec& lower, const Vec& upper, const MultiIndex& alpha);
/// E[x^alpha] for x uniform on the centred ball of the given radius.
double ball_moment(int dim, double radius, const MultiIndex& alpha);

}  // namespace kks
