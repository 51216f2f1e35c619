#include "kksampling/special_functions.hpp"

#include <cmath>
#include <limits>

#include "kksampling/errors.hpp"

namespace kks {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr double kTaylorSwitch = 1e-4;

// sin(x) for |x| < pi * 1e-4, six terms.
double sin_taylor(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k < 6; ++k) {
    term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
  }
  return sum;
}

double bessel_series(double nu, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (k * (k + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > half) break;
  }
  return sum;
}

double bessel_asymptotic(double nu, double x) {
  // Hankel expansion: J = sqrt(2 / (pi x)) (P cos chi - Q sin chi).
  const double mu = 4.0 * nu * nu;
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // a_k contributes to Q for odd k, P for even k, with alternating signs.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (last < 1e-17) break;
  }
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double sinc(double t) {
  if (t == 0.0) return 1.0;
  if (!std::isfinite(t)) return std::isinf(t) ? 0.0 : t;
  const double n = std::nearbyint(t);
  const double e = t - n;
  const double s = std::abs(e) < kTaylorSwitch ? sin_taylor(kPi * e) : std::sin(kPi * e);
  const double sign = std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0;
  if (n == 0.0) return s / (kPi * e);
  return sign * s / (kPi * t);
}

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx w = kPi * kPi * z * z;
    // 1 - w/6 + w^2/120 - w^3/5040
    return 1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0;
  }
  return std::sin(kPi * z) / (kPi * z);
}

double sinc(const Vec& x) {
  double v = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) v *= sinc(x[i]);
  return v;
}

double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw InvalidArgument("bessel_j requires nu >= 0 and x >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return bessel_series(nu, x);
  return bessel_asymptotic(nu, x);
}

double bessel_j_scaled(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw InvalidArgument("bessel_j_scaled requires nu >= 0 and x >= 0");
  if (x <= kSeriesLimit) {
    const double q = 0.25 * x * x;
    double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (k * (k + nu));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 0.5 * x) break;
    }
    return sum;
  }
  return bessel_asymptotic(nu, x) / std::pow(x, nu);
}

cplx bessel_j_scaled_series(double nu, cplx z_squared) {
  const cplx q = 0.25 * z_squared;
  cplx term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
  cplx sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (k * (k + nu));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum) && k > std::sqrt(std::abs(q))) break;
  }
  return sum;
}

}  // namespace kks
