#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "kksampling/trig_polynomial.hpp"
#include "kksampling/types.hpp"

namespace kks {

/// Spatial decay of a reconstruction kernel. Sinc-type kernels decay like
/// |x|^{-1} per axis and are not absolutely summable over the lattice; the
/// operator module needs this to pick a truncation strategy.
enum class DecayClass { l2_only, summable };

std::string to_string(DecayClass c);

/// phi(x) = sum_l a_l sinc(x + l), symbol T(xi) chi_{[-1/2,1/2]^d}(xi).
struct SincCombo {
  TrigPolynomial symbol;
};

/// phi(x) = prod_nu (1/s) sinc^2(x_nu / s), symbol prod_nu (1 - s|xi_nu|)_+.
/// Scale 2 gives the Fejer-type kernel (1/2) sinc^2(x/2).
struct SincSquared {
  int dim = 1;
  double scale = 1.0;
};

/// Bochner-Riesz kernel with radial symbol (1 - |xi|^2)_+^delta.
struct BochnerRiesz {
  int dim = 2;
  double delta = 1.0;
};

/// Band-limited reconstruction kernel phi together with its closed-form symbol.
class Kernel {
 public:
  using Variant = std::variant<SincCombo, SincSquared, BochnerRiesz>;

  static Kernel sinc(int dim);
  static Kernel sinc_combo(TrigPolynomial symbol);
  static Kernel sinc_squared(int dim, double scale);
  static Kernel bochner_riesz(int dim, double delta);

  const Variant& variant() const { return variant_; }
  int dim() const;
  std::string name() const;
  DecayClass decay_class() const;
  /// Radius outside which the symbol vanishes.
  double freq_support_radius() const;
  /// Upper bound on sup |phi|, used for truncation tail bounds.
  double sup_bound() const;

  /// Point evaluation phi(x). Throws if a combination with complex
  /// coefficients has an imaginary part above 1e-10 at x.
  double operator()(const Vec& x) const;
  /// Complex-valued evaluation (kernels synthesized for asymmetric averagers).
  cplx evaluate_complex(const Vec& x) const;

  /// phi-hat(xi) with the convention exp(-2 pi i (x, xi)).
  cplx fourier(const Vec& xi) const;

  /// True when the symbol is analytic in a neighbourhood of the origin.
  bool has_smooth_symbol() const;
  /// Analytic continuation of the symbol near 0 (the box factor is 1 there).
  /// Throws InvalidArgument for SincSquared, whose symbol has a kink at 0.
  cplx germ(const CVec& xi) const;
  /// Closed-form D^alpha phi-hat(0).
  cplx symbol_derivative(const MultiIndex& alpha) const;

  nlohmann::json to_json() const;
  static Kernel from_json(const nlohmann::json& doc);

 private:
  explicit Kernel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

}  // namespace kks
