#include "kksampling/averager.hpp"

#include <cmath>

#include "kksampling/errors.hpp"
#include "kksampling/special_functions.hpp"

namespace kks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i) / (i + 1.0);
  return r;
}

// (-2 pi i)^p
cplx minus_two_pi_i_pow(int p) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < p; ++i) r *= cplx(0.0, -kTwoPi);
  return r;
}

double ball_measure(int dim, double r) {
  return std::pow(kPi, 0.5 * dim) * std::pow(r, dim) / std::tgamma(0.5 * dim + 1.0);
}

// Gamma(1 + d/2) J_{d/2}(z) / (z/2)^{d/2} with z = 2 pi r |xi|.
double ball_symbol(int dim, double r, double xi_norm) {
  const double nu = 0.5 * dim;
  return std::tgamma(1.0 + nu) * std::pow(2.0, nu) * bessel_j_scaled(nu, kTwoPi * r * xi_norm);
}

// Enumerate all gamma <= alpha (componentwise).
template <class F>
void for_each_sub_index(const MultiIndex& alpha, F&& f) {
  MultiIndex gamma(alpha.size(), 0);
  while (true) {
    f(gamma);
    std::size_t i = 0;
    while (i < gamma.size()) {
      if (gamma[i] < alpha[i]) {
        ++gamma[i];
        break;
      }
      gamma[i] = 0;
      ++i;
    }
    if (i == gamma.size()) return;
  }
}

}  // namespace

double box_moment(const Vec& lower, const Vec& upper, const MultiIndex& alpha) {
  double m = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double a = lower[ii];
    const double b = upper[ii];
    const int p = alpha[i] + 1;
    m *= (std::pow(b, p) - std::pow(a, p)) / (p * (b - a));
  }
  return m;
}

double ball_moment(int dim, double radius, const MultiIndex& alpha) {
  // int_{B_1} x^alpha = 2 prod Gamma(b_i) / (Gamma(sum b_i) ([alpha] + d)), b_i = (alpha_i + 1) / 2.
  double prod = 1.0;
  double bsum = 0.0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
    const double b = 0.5 * (a + 1);
    prod *= std::tgamma(b);
    bsum += b;
  }
  const int deg = total_degree(alpha);
  const double integral = 2.0 * prod / (std::tgamma(bsum) * (deg + dim));
  return std::pow(radius, deg) * integral / ball_measure(dim, 1.0);
}

Averager Averager::box(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size() || lower.size() == 0 || lower.size() > kMaxDim)
    throw InvalidArgument("box bounds must have equal, valid dimension");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(upper[i] > lower[i])) throw InvalidArgument("box must have positive extent on every axis");
  return Averager(BoxIndicator{lower, upper});
}

Averager Averager::centered_box(int dim) {
  return box(Vec::Constant(dim, -0.5), Vec::Constant(dim, 0.5));
}

Averager Averager::ball(int dim, double radius) {
  if (dim != 1 && dim != 2) throw InvalidArgument("ball averager supports d = 1 or 2");
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  return Averager(BallIndicator{dim, radius});
}

Averager Averager::shifted_combo(const Averager& base, TrigPolynomial shifts) {
  if (shifts.dim() != base.dim()) throw InvalidArgument("shift polynomial dimension mismatch");
  if (std::holds_alternative<SincAnalysis>(base.variant_))
    throw InvalidArgument("shifted combinations need a compactly supported base");
  return Averager(ShiftedCombo{std::make_shared<const Averager>(base), std::move(shifts)});
}

Averager Averager::sinc(int dim) {
  if (dim <= 0 || dim > kMaxDim) throw InvalidArgument("sinc averager dimension out of range");
  return Averager(SincAnalysis{dim});
}

int Averager::dim() const {
  return std::visit(overloaded{[](const BoxIndicator& a) { return static_cast<int>(a.lower.size()); },
                               [](const BallIndicator& a) { return a.dim; },
                               [](const ShiftedCombo& a) { return a.base->dim(); },
                               [](const SincAnalysis& a) { return a.dim; }},
                    variant_);
}

std::string Averager::name() const {
  return std::visit(overloaded{[](const BoxIndicator&) -> std::string { return "box"; },
                               [](const BallIndicator&) -> std::string { return "ball"; },
                               [](const ShiftedCombo&) -> std::string { return "shifted_combo"; },
                               [](const SincAnalysis&) -> std::string { return "sinc"; }},
                    variant_);
}

double Averager::measure() const {
  return std::visit(overloaded{[](const BoxIndicator& a) { return (a.upper - a.lower).prod(); },
                               [](const BallIndicator& a) { return ball_measure(a.dim, a.radius); },
                               [](const ShiftedCombo& a) { return a.base->measure(); },
                               [](const SincAnalysis&) { return 1.0; }},
                    variant_);
}

bool Averager::compact_support() const { return !std::holds_alternative<SincAnalysis>(variant_); }

double Averager::support_radius() const {
  return std::visit(overloaded{[](const BoxIndicator& a) {
                                 return a.lower.cwiseAbs().cwiseMax(a.upper.cwiseAbs()).norm();
                               },
                               [](const BallIndicator& a) { return a.radius; },
                               [](const ShiftedCombo& a) {
                                 double shift = 0.0;
                                 for (const auto& [l, b] : a.shifts.coefficients())
                                   shift = std::max(shift, to_vec(l).norm());
                                 return a.base->support_radius() + shift;
                               },
                               [](const SincAnalysis&) { return std::numeric_limits<double>::infinity(); }},
                    variant_);
}

bool Averager::is_symmetric() const {
  return std::visit(overloaded{[](const BoxIndicator& a) { return (a.lower + a.upper).isZero(0.0); },
                               [](const BallIndicator&) { return true; },
                               [](const ShiftedCombo& a) {
                                 if (!a.base->is_symmetric()) return false;
                                 for (const auto& [l, b] : a.shifts.coefficients()) {
                                   LatticePoint neg(l.size());
                                   for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
                                   if (std::abs(a.shifts.coefficient(neg) - b) > 1e-14) return false;
                                 }
                                 return true;
                               },
                               [](const SincAnalysis&) { return true; }},
                    variant_);
}

double Averager::operator()(const Vec& x) const {
  if (x.size() != dim()) throw InvalidArgument("point dimension does not match averager dimension");
  return std::visit(overloaded{[&](const BoxIndicator& a) {
                                 for (Eigen::Index i = 0; i < x.size(); ++i)
                                   if (x[i] < a.lower[i] || x[i] > a.upper[i]) return 0.0;
                                 return 1.0 / (a.upper - a.lower).prod();
                               },
                               [&](const BallIndicator& a) {
                                 return x.norm() <= a.radius ? 1.0 / ball_measure(a.dim, a.radius) : 0.0;
                               },
                               [&](const ShiftedCombo& a) {
                                 cplx sum{};
                                 for (const auto& [l, b] : a.shifts.coefficients())
                                   sum += b * (*a.base)(x + to_vec(l));
                                 return sum.real();
                               },
                               [&](const SincAnalysis&) { return kks::sinc(x); }},
                    variant_);
}

cplx Averager::fourier(const Vec& xi) const {
  if (xi.size() != dim()) throw InvalidArgument("frequency dimension does not match averager dimension");
  return std::visit(overloaded{[&](const BoxIndicator& a) {
                                 cplx v(1.0, 0.0);
                                 for (Eigen::Index i = 0; i < xi.size(); ++i) {
                                   const double width = a.upper[i] - a.lower[i];
                                   const double mid = 0.5 * (a.upper[i] + a.lower[i]);
                                   v *= std::polar(1.0, -kTwoPi * mid * xi[i]) * kks::sinc(width * xi[i]);
                                 }
                                 return v;
                               },
                               [&](const BallIndicator& a) {
                                 return cplx(ball_symbol(a.dim, a.radius, xi.norm()), 0.0);
                               },
                               [&](const ShiftedCombo& a) { return a.shifts(xi) * a.base->fourier(xi); },
                               [&](const SincAnalysis&) {
                                 for (Eigen::Index i = 0; i < xi.size(); ++i)
                                   if (std::abs(xi[i]) >= 0.5) return cplx{};
                                 return cplx(1.0, 0.0);
                               }},
                    variant_);
}

cplx Averager::germ(const CVec& xi) const {
  if (xi.size() != dim()) throw InvalidArgument("germ point has wrong dimension");
  return std::visit(overloaded{[&](const BoxIndicator& a) {
                                 cplx v(1.0, 0.0);
                                 for (Eigen::Index i = 0; i < xi.size(); ++i) {
                                   const double width = a.upper[i] - a.lower[i];
                                   const double mid = 0.5 * (a.upper[i] + a.lower[i]);
                                   v *= std::exp(cplx(0.0, -kTwoPi * mid) * xi[i]) * kks::sinc(width * xi[i]);
                                 }
                                 return v;
                               },
                               [&](const BallIndicator& a) {
                                 cplx r2{};
                                 for (Eigen::Index i = 0; i < xi.size(); ++i) r2 += xi[i] * xi[i];
                                 const double nu = 0.5 * a.dim;
                                 const cplx z2 = kTwoPi * kTwoPi * a.radius * a.radius * r2;
                                 return std::tgamma(1.0 + nu) * std::pow(2.0, nu) *
                                        bessel_j_scaled_series(nu, z2);
                               },
                               [&](const ShiftedCombo& a) { return a.shifts(xi) * a.base->germ(xi); },
                               [&](const SincAnalysis&) { return cplx(1.0, 0.0); }},
                    variant_);
}

cplx Averager::symbol_derivative(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim()) throw InvalidArgument("multi-index has wrong dimension");
  const int deg = total_degree(alpha);
  return std::visit(overloaded{[&](const BoxIndicator& a) {
                                 return minus_two_pi_i_pow(deg) * box_moment(a.lower, a.upper, alpha);
                               },
                               [&](const BallIndicator& a) {
                                 return minus_two_pi_i_pow(deg) * ball_moment(a.dim, a.radius, alpha);
                               },
                               [&](const ShiftedCombo& a) {
                                 cplx sum{};
                                 for_each_sub_index(alpha, [&](const MultiIndex& gamma) {
                                   MultiIndex rest(alpha.size());
                                   double coeff = 1.0;
                                   for (std::size_t i = 0; i < alpha.size(); ++i) {
                                     rest[i] = alpha[i] - gamma[i];
                                     coeff *= binomial(alpha[i], gamma[i]);
                                   }
                                   sum += coeff * a.shifts.derivative_at_zero(gamma) *
                                          a.base->symbol_derivative(rest);
                                 });
                                 return sum;
                               },
                               [&](const SincAnalysis&) { return deg == 0 ? cplx(1.0) : cplx{}; }},
                    variant_);
}

nlohmann::json Averager::to_json() const {
  auto vec_json = [](const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  return std::visit(
      overloaded{[&](const BoxIndicator& a) {
                   return nlohmann::json{{"variant", "box"},
                                         {"dim", a.lower.size()},
                                         {"lower", vec_json(a.lower)},
                                         {"upper", vec_json(a.upper)}};
                 },
                 [](const BallIndicator& a) {
                   return nlohmann::json{{"variant", "ball"}, {"dim", a.dim}, {"radius", a.radius}};
                 },
                 [](const ShiftedCombo& a) {
                   return nlohmann::json{{"variant", "shifted_combo"},
                                         {"dim", a.base->dim()},
                                         {"base", a.base->to_json()},
                                         {"coefficients", coefficients_to_json(a.shifts)}};
                 },
                 [](const SincAnalysis& a) { return nlohmann::json{{"variant", "sinc"}, {"dim", a.dim}}; }},
      variant_);
}

Averager Averager::from_json(const nlohmann::json& doc) {
  try {
    const auto variant = doc.at("variant").get<std::string>();
    const int dim = doc.at("dim").get<int>();
    if (variant == "box") {
      const auto lo = doc.at("lower").get<std::vector<double>>();
      const auto hi = doc.at("upper").get<std::vector<double>>();
      if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw InvalidArgument("box bounds do not match dim");
      return box(Eigen::Map<const Eigen::VectorXd>(lo.data(), dim), Eigen::Map<const Eigen::VectorXd>(hi.data(), dim));
    }
    if (variant == "ball") return ball(dim, doc.at("radius").get<double>());
    if (variant == "sinc") return sinc(dim);
    if (variant == "shifted_combo")
      return shifted_combo(from_json(doc.at("base")), coefficients_from_json(dim, doc.at("coefficients")));
    throw InvalidArgument("unknown averager variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed averager document: ") + e.what());
  }
}

}  // namespace kks
