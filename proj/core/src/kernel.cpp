#include "kksampling/kernel.hpp"

#include <cmath>
#include <sstream>

#include "kksampling/errors.hpp"
#include "kksampling/special_functions.hpp"

namespace kks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kImagTolerance = 1e-10;

double generalized_binomial(double top, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (top - i) / (i + 1.0);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void require_dim(const Vec& x, int dim) {
  if (x.size() != dim) throw InvalidArgument("point dimension does not match kernel dimension");
}

}  // namespace

std::string to_string(DecayClass c) { return c == DecayClass::l2_only ? "l2_only" : "summable"; }

Kernel Kernel::sinc(int dim) { return sinc_combo(TrigPolynomial::constant(dim, 1.0)); }

Kernel Kernel::sinc_combo(TrigPolynomial symbol) {
  if (symbol.empty()) throw InvalidArgument("sinc combination needs at least one coefficient");
  return Kernel(SincCombo{std::move(symbol)});
}

Kernel Kernel::sinc_squared(int dim, double scale) {
  if (dim <= 0 || dim > kMaxDim) throw InvalidArgument("sinc_squared dimension out of range");
  if (!(scale > 0.0)) throw InvalidArgument("sinc_squared scale must be positive");
  return Kernel(SincSquared{dim, scale});
}

Kernel Kernel::bochner_riesz(int dim, double delta) {
  if (dim != 1 && dim != 2) throw InvalidArgument("Bochner-Riesz kernel supports d = 1 or 2");
  if (!(delta > 0.0)) throw InvalidArgument("Bochner-Riesz order delta must be positive");
  return Kernel(BochnerRiesz{dim, delta});
}

int Kernel::dim() const {
  return std::visit(overloaded{[](const SincCombo& k) { return k.symbol.dim(); },
                               [](const SincSquared& k) { return k.dim; },
                               [](const BochnerRiesz& k) { return k.dim; }},
                    variant_);
}

std::string Kernel::name() const {
  return std::visit(overloaded{[](const SincCombo& k) -> std::string {
                                 return k.symbol.size() == 1 ? "sinc" : "sinc_combo";
                               },
                               [](const SincSquared&) -> std::string { return "sinc_squared"; },
                               [](const BochnerRiesz&) -> std::string { return "bochner_riesz"; }},
                    variant_);
}

DecayClass Kernel::decay_class() const {
  return std::visit(overloaded{[](const SincCombo&) { return DecayClass::l2_only; },
                               [](const SincSquared&) { return DecayClass::summable; },
                               [](const BochnerRiesz& k) {
                                 // |R_delta(x)| ~ |x|^{-(d+1)/2 - delta}
                                 return 0.5 * (k.dim + 1) + k.delta > k.dim ? DecayClass::summable
                                                                            : DecayClass::l2_only;
                               }},
                    variant_);
}

double Kernel::freq_support_radius() const {
  return std::visit(overloaded{[](const SincCombo& k) { return 0.5 * std::sqrt(double(k.symbol.dim())); },
                               [](const SincSquared& k) { return std::sqrt(double(k.dim)) / k.scale; },
                               [](const BochnerRiesz&) { return 1.0; }},
                    variant_);
}

double Kernel::sup_bound() const {
  return std::visit(overloaded{[](const SincCombo& k) {
                                 double s = 0.0;
                                 for (const auto& [l, a] : k.symbol.coefficients()) s += std::abs(a);
                                 return s;
                               },
                               [](const SincSquared& k) { return std::pow(1.0 / k.scale, k.dim); },
                               [this](const BochnerRiesz& k) {
                                 return std::abs((*this)(Vec::Zero(k.dim)));
                               }},
                    variant_);
}

cplx Kernel::evaluate_complex(const Vec& x) const {
  require_dim(x, dim());
  return std::visit(
      overloaded{[&](const SincCombo& k) {
                   cplx sum{};
                   Vec y(x.size());
                   for (const auto& [l, a] : k.symbol.coefficients()) {
                     for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = x[i] + l[static_cast<std::size_t>(i)];
                     sum += a * kks::sinc(y);
                   }
                   return sum;
                 },
                 [&](const SincSquared& k) {
                   double v = 1.0;
                   for (Eigen::Index i = 0; i < x.size(); ++i) {
                     const double s = kks::sinc(x[i] / k.scale);
                     v *= s * s / k.scale;
                   }
                   return cplx(v, 0.0);
                 },
                 [&](const BochnerRiesz& k) {
                   const double nu = 0.5 * k.dim + k.delta;
                   const double z = kTwoPi * x.norm();
                   const double v = std::tgamma(1.0 + k.delta) * std::pow(kPi, -k.delta) *
                                    std::pow(kTwoPi, nu) * bessel_j_scaled(nu, z);
                   return cplx(v, 0.0);
                 }},
      variant_);
}

double Kernel::operator()(const Vec& x) const {
  const cplx v = evaluate_complex(x);
  if (std::abs(v.imag()) > kImagTolerance) {
    std::ostringstream msg;
    msg << "kernel value has imaginary part " << v.imag() << "; use evaluate_complex";
    throw InvalidArgument(msg.str());
  }
  return v.real();
}

cplx Kernel::fourier(const Vec& xi) const {
  require_dim(xi, dim());
  return std::visit(overloaded{[&](const SincCombo& k) {
                                 for (Eigen::Index i = 0; i < xi.size(); ++i)
                                   if (std::abs(xi[i]) >= 0.5) return cplx{};
                                 return k.symbol(xi);
                               },
                               [&](const SincSquared& k) {
                                 double v = 1.0;
                                 for (Eigen::Index i = 0; i < xi.size(); ++i)
                                   v *= std::max(0.0, 1.0 - k.scale * std::abs(xi[i]));
                                 return cplx(v, 0.0);
                               },
                               [&](const BochnerRiesz& k) {
                                 const double r2 = xi.squaredNorm();
                                 if (r2 >= 1.0) return cplx{};
                                 return cplx(std::pow(1.0 - r2, k.delta), 0.0);
                               }},
                    variant_);
}

bool Kernel::has_smooth_symbol() const { return !std::holds_alternative<SincSquared>(variant_); }

cplx Kernel::germ(const CVec& xi) const {
  if (xi.size() != dim()) throw InvalidArgument("germ point has wrong dimension");
  return std::visit(overloaded{[&](const SincCombo& k) { return k.symbol(xi); },
                               [&](const SincSquared&) -> cplx {
                                 throw InvalidArgument("sinc_squared symbol is not smooth at the origin");
                               },
                               [&](const BochnerRiesz& k) {
                                 cplx r2{};
                                 for (Eigen::Index i = 0; i < xi.size(); ++i) r2 += xi[i] * xi[i];
                                 return std::pow(1.0 - r2, k.delta);
                               }},
                    variant_);
}

cplx Kernel::symbol_derivative(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim()) throw InvalidArgument("multi-index has wrong dimension");
  return std::visit(overloaded{[&](const SincCombo& k) { return k.symbol.derivative_at_zero(alpha); },
                               [&](const SincSquared&) -> cplx {
                                 throw InvalidArgument("sinc_squared symbol is not smooth at the origin");
                               },
                               [&](const BochnerRiesz& k) -> cplx {
                                 // (1 - |xi|^2)^delta = sum_s binom(delta, s) (-1)^s (sum_i xi_i^2)^s
                                 int s = 0;
                                 double multinomial = 1.0;
                                 for (int a : alpha) {
                                   if (a % 2 != 0) return 0.0;
                                   s += a / 2;
                                   multinomial /= factorial(a / 2);
                                 }
                                 multinomial *= factorial(s);
                                 double alpha_factorial = 1.0;
                                 for (int a : alpha) alpha_factorial *= factorial(a);
                                 const double sign = s % 2 == 0 ? 1.0 : -1.0;
                                 return generalized_binomial(k.delta, s) * sign * multinomial *
                                        alpha_factorial;
                               }},
                    variant_);
}

nlohmann::json Kernel::to_json() const {
  return std::visit(overloaded{[](const SincCombo& k) {
                                 return nlohmann::json{{"variant", "sinc_combo"},
                                                       {"dim", k.symbol.dim()},
                                                       {"coefficients", coefficients_to_json(k.symbol)}};
                               },
                               [](const SincSquared& k) {
                                 return nlohmann::json{
                                     {"variant", "sinc_squared"}, {"dim", k.dim}, {"scale", k.scale}};
                               },
                               [](const BochnerRiesz& k) {
                                 return nlohmann::json{
                                     {"variant", "bochner_riesz"}, {"dim", k.dim}, {"delta", k.delta}};
                               }},
                    variant_);
}

Kernel Kernel::from_json(const nlohmann::json& doc) {
  try {
    const auto variant = doc.at("variant").get<std::string>();
    const int dim = doc.at("dim").get<int>();
    if (variant == "sinc_combo") return sinc_combo(coefficients_from_json(dim, doc.at("coefficients")));
    if (variant == "sinc") return sinc(dim);
    if (variant == "sinc_squared") return sinc_squared(dim, doc.at("scale").get<double>());
    if (variant == "bochner_riesz") return bochner_riesz(dim, doc.at("delta").get<double>());
    throw InvalidArgument("unknown kernel variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed kernel document: ") + e.what());
  }
}

}  // namespace kks
