#pragma once

#include "kksampling/types.hpp"

namespace kks {

/// sin(pi t) / (pi t), continuous at t = 0.
///
/// The argument is reduced to t = n + e with integer n and |e| <= 1/2, and
/// sin(pi t) is formed as (-1)^n sin(pi e). For |e| < 1e-4 a six-term Taylor
/// expansion replaces sin(pi e), so values near lattice zeros keep full
/// relative accuracy.
double sinc(double t);

/// Complex-argument sinc for analytic continuation of symbols near the origin.
cplx sinc(cplx z);

/// Tensor sinc prod_nu sinc(x_nu).
double sinc(const Vec& x);

/// Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.
/// Power series for x <= 12, Hankel asymptotic expansion beyond.
double bessel_j(double nu, double x);

/// J_nu(x) / x^nu, continuous at x = 0 with value 1 / (2^nu Gamma(nu + 1)).
double bessel_j_scaled(double nu, double x);

/// Complex J_nu(z) / z^nu via the power series in (z/2)^2; intended for
/// small |z| (used for germs of radial symbols near the origin).
cplx bessel_j_scaled_series(double nu, cplx z_squared);

}  // namespace kks
