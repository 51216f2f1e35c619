#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kksampling/averager.hpp"
#include "kksampling/dilation.hpp"
#include "kksampling/test_function.hpp"
#include "kksampling/types.hpp"

namespace kks {

enum class QuadratureRule { automatic, tensor_gauss_legendre, tensor_polar };

std::string to_string(QuadratureRule r);
QuadratureRule quadrature_rule_from_string(const std::string& s);

/// Quadrature settings for the analysis coefficients. `automatic` uses tensor
/// Gauss-Legendre on boxes and the polar rule on balls.
struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::automatic;
  int nodes_per_axis = 24;
  int subdivisions = 2;
  int radial_nodes = 32;
  int angular_nodes = 64;
  std::size_t node_budget = 4'000'000;

  /// Throws InvalidArgument for out-of-range settings.
  void validate() const;
  /// Same spec with every node count doubled (self-refinement checks).
  QuadratureSpec refined() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; thread-safe, references stay valid for the process lifetime.
const GaussRule& gauss_legendre(int n);

/// Tensor Gauss-Legendre over the panels delimited by `edges[axis]` (sorted
/// breakpoints per axis, n nodes per panel). Throws BudgetExceeded if the total
/// node count exceeds `budget`.
double integrate_panels(const std::function<double(const Vec&)>& f, const std::vector<std::vector<double>>& edges,
                        int nodes, std::size_t budget);
cplx integrate_panels_complex(const std::function<cplx(const Vec&)>& f,
                              const std::vector<std::vector<double>>& edges, int nodes, std::size_t budget);

/// Integral over a box split into q.subdivisions equal panels per axis.
double integrate_box(const std::function<double(const Vec&)>& f, const Box& box, const QuadratureSpec& q);

/// Integral over the disk of the given radius centred at `center` (d = 2), with
/// Gauss-Legendre in s = r^2 and the trapezoidal rule in the angle.
double integrate_disk(const std::function<double(const Vec&)>& f, const Vec& center, double radius,
                      const QuadratureSpec& q);

/// c_jk(f) = m^j integral f(u) conj(phi-tilde(M^j u + k)) du.
///
/// Indicator averagers are integrated exactly over their support, so the
/// result is the mean of f over M^{-j}(U - k). Combinations return
/// sum_l conj(b_l) c_{j,k+l} of the base. The sinc averager is integrated
/// spatially over f's support when f has one, otherwise through f-hat.
cplx coefficient(const TestFunction& f, const Averager& averager, const DilationMatrix& m, int j,
                 const LatticePoint& k, const QuadratureSpec& q);

/// Extra structure of f-hat that lets the Fourier-side rule place panel edges.
struct FourierHints {
  /// f-hat vanishes for |xi|_inf > band_limit (infinite when unknown).
  double band_limit = std::numeric_limits<double>::infinity();
  /// 1-D frequencies where f-hat has kinks.
  std::vector<double> kinks;
};

/// m^j integral over [-1/2,1/2]^d of fhat(M*^j eta) exp(-2 pi i (k, eta)) d eta.
///
/// This equals <f, sinc(M^j . + k)> scaled by m^j, i.e. the coefficient of the
/// sinc-sinc quasi-projection, and also the sample at -M^{-j} k of the inverse
/// transform of fhat restricted to M*^j [-1/2,1/2]^d.
cplx fourier_coefficient(const std::function<cplx(const Vec&)>& fhat, const DilationMatrix& m, int j,
                         const LatticePoint& k, const QuadratureSpec& q, const FourierHints& hints = {});

/// Fourier-side coefficient using the function's band limit and kinks as hints.
cplx fourier_coefficient(const TestFunction& f, const DilationMatrix& m, int j, const LatticePoint& k,
                         const QuadratureSpec& q);

}  // namespace kks
