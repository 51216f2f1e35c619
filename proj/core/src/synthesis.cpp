#include "kksampling/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "kksampling/errors.hpp"

namespace kks {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i) / (i + 1.0);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_order(int n) {
  if (n < 1) throw InvalidArgument("approximation order must be positive");
  if (n > kMaxOrder) throw InvalidArgument("approximation order is capped at 8");
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Solves sum_{alpha <= beta} binom(beta, alpha) w(D^{beta - alpha} a(0)) c_alpha = rhs_beta,
// where w is conjugation or identity.
CoefficientMap triangular_solve(const MomentTable& table, int n, const CoefficientMap& rhs, bool conjugate) {
  if (table.order < n) throw InvalidArgument("moment table order is below the requested order");
  const auto indices = multi_indices_below(table.dim, n);
  const MultiIndex zero(static_cast<std::size_t>(table.dim), 0);
  auto coef = [&](const MultiIndex& alpha) {
    const cplx v = table.at(alpha);
    return conjugate ? std::conj(v) : v;
  };
  const cplx pivot = coef(zero);
  if (std::abs(pivot) < 1e-14) throw IllConditioned("symbol vanishes at the origin");

  CoefficientMap c;
  for (const auto& beta : indices) {
    auto it = rhs.find(beta);
    cplx acc = it == rhs.end() ? cplx{} : it->second;
    for (const auto& [alpha, value] : c) {
      if (!leq(alpha, beta)) continue;
      double b = 1.0;
      MultiIndex diff(beta.size());
      for (std::size_t i = 0; i < beta.size(); ++i) {
        b *= binomial(beta[i], alpha[i]);
        diff[i] = beta[i] - alpha[i];
      }
      acc -= b * coef(diff) * value;
    }
    c[beta] = acc / pivot;
  }
  return c;
}

// Coefficients of prod_{i != l} (x - i) for i in {0, ..., n-1}, low degree first.
std::vector<std::int64_t> lagrange_numerator(int l, int n) {
  std::vector<std::int64_t> poly{1};
  for (int i = 0; i < n; ++i) {
    if (i == l) continue;
    std::vector<std::int64_t> next(poly.size() + 1, 0);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] += poly[d];
      next[d] -= static_cast<std::int64_t>(i) * poly[d];
    }
    poly = std::move(next);
  }
  return poly;
}

// Natural magnitude of D^alpha of a sinc combination: sum_l |a_l| prod |2 pi l_nu|^{alpha_nu}.
double derivative_scale(const TrigPolynomial& t, const MultiIndex& alpha) {
  double s = 0.0;
  for (const auto& [l, a] : t.coefficients()) {
    double f = std::abs(a);
    for (std::size_t i = 0; i < alpha.size(); ++i) f *= std::pow(kTwoPi * std::abs(l[i]), alpha[i]);
    s += f;
  }
  return s;
}

}  // namespace

cplx MomentTable::at(const MultiIndex& alpha) const {
  auto it = derivs.find(alpha);
  if (it == derivs.end()) throw InvalidArgument("multi-index outside the moment table");
  return it->second;
}

std::vector<MultiIndex> multi_indices_below(int dim, int n) {
  if (dim <= 0 || dim > kMaxDim) throw InvalidArgument("dimension out of range");
  std::vector<MultiIndex> out;
  for (int deg = 0; deg < n; ++deg) {
    // Lexicographically descending in the first coordinate, i.e. (deg, 0, ...) first.
    MultiIndex alpha(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
      if (axis == dim - 1) {
        alpha[static_cast<std::size_t>(axis)] = remaining;
        out.push_back(alpha);
        return;
      }
      for (int a = remaining; a >= 0; --a) {
        alpha[static_cast<std::size_t>(axis)] = a;
        rec(axis + 1, remaining - a);
      }
    };
    rec(0, deg);
  }
  return out;
}

MomentTable moment_table(const Symbol& symbol, int dim, int n, const RichardsonOptions& opts) {
  if (n < 1) throw InvalidArgument("order must be positive");
  if (opts.levels < 0 || !(opts.base_step > 0.0)) throw InvalidArgument("invalid Richardson options");
  MomentTable table{n, dim, {}};
  for (const auto& alpha : multi_indices_below(dim, n)) {
    // Tensor central stencil: offsets (a/2 - i) h with weights (-1)^i binom(a, i).
    auto central = [&](double h) {
      std::vector<int> idx(static_cast<std::size_t>(dim), 0);
      cplx sum{};
      while (true) {
        Vec x(dim);
        double w = 1.0;
        for (int v = 0; v < dim; ++v) {
          const int a = alpha[static_cast<std::size_t>(v)];
          const int i = idx[static_cast<std::size_t>(v)];
          x[v] = (0.5 * a - i) * h;
          w *= ((i % 2) ? -1.0 : 1.0) * binomial(a, i);
        }
        sum += w * symbol(x);
        int v = 0;
        for (; v < dim; ++v) {
          auto& i = idx[static_cast<std::size_t>(v)];
          if (i < alpha[static_cast<std::size_t>(v)]) {
            ++i;
            break;
          }
          i = 0;
        }
        if (v == dim) break;
      }
      return sum / std::pow(h, total_degree(alpha));
    };
    // Richardson tableau over steps h, h/2, ..., h/2^levels; error expansion in h^2.
    std::vector<std::vector<cplx>> tab(static_cast<std::size_t>(opts.levels) + 1);
    for (int i = 0; i <= opts.levels; ++i) tab[0].push_back(central(opts.base_step / std::pow(2.0, i)));
    for (int lev = 1; lev <= opts.levels; ++lev) {
      const double f = std::pow(4.0, lev);
      const auto& prev = tab[static_cast<std::size_t>(lev - 1)];
      for (std::size_t i = 0; i + 1 < prev.size(); ++i)
        tab[static_cast<std::size_t>(lev)].push_back((f * prev[i + 1] - prev[i]) / (f - 1.0));
    }
    const cplx best = tab.back().front();
    if (opts.levels > 0) {
      const cplx previous = tab[tab.size() - 2].back();
      if (std::abs(best - previous) > opts.agreement_tol) {
        std::ostringstream msg;
        msg << "Richardson levels disagree by " << std::abs(best - previous) << " at multi-index (";
        for (std::size_t i = 0; i < alpha.size(); ++i) msg << (i ? "," : "") << alpha[i];
        msg << ")";
        throw NonConvergence(msg.str());
      }
    }
    table.derivs[alpha] = best;
  }
  return table;
}

MomentTable moment_table_contour(const AnalyticSymbol& symbol, int dim, int n, const ContourOptions& opts) {
  if (n < 1) throw InvalidArgument("order must be positive");
  if (opts.points < 2 * n || !(opts.radius > 0.0)) throw InvalidArgument("invalid contour options");
  const int m = opts.points;
  std::size_t total = 1;
  for (int v = 0; v < dim; ++v) total *= static_cast<std::size_t>(m);

  std::vector<cplx> roots(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) roots[static_cast<std::size_t>(t)] = std::polar(1.0, kTwoPi * t / m);

  std::vector<cplx> values(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    CVec xi(dim);
    std::size_t rem = flat;
    for (int v = 0; v < dim; ++v) {
      xi[v] = opts.radius * roots[rem % static_cast<std::size_t>(m)];
      rem /= static_cast<std::size_t>(m);
    }
    values[flat] = symbol(xi);
  }

  MomentTable table{n, dim, {}};
  for (const auto& alpha : multi_indices_below(dim, n)) {
    cplx sum{};
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      cplx w(1.0, 0.0);
      for (int v = 0; v < dim; ++v) {
        const std::size_t t = rem % static_cast<std::size_t>(m);
        rem /= static_cast<std::size_t>(m);
        const std::size_t e = (t * static_cast<std::size_t>(alpha[static_cast<std::size_t>(v)])) %
                              static_cast<std::size_t>(m);
        w *= std::conj(roots[e]);
      }
      sum += w * values[flat];
    }
    double scale = 1.0;
    for (int a : alpha) scale *= factorial(a) / std::pow(opts.radius, a);
    table.derivs[alpha] = sum * scale / static_cast<double>(total);
  }
  return table;
}

MomentTable moment_table(const Averager& averager, int n) {
  if (n < 1) throw InvalidArgument("order must be positive");
  MomentTable table{n, averager.dim(), {}};
  for (const auto& alpha : multi_indices_below(averager.dim(), n))
    table.derivs[alpha] = averager.symbol_derivative(alpha);
  return table;
}

MomentTable moment_table(const Kernel& kernel, int n) {
  if (n < 1) throw InvalidArgument("order must be positive");
  MomentTable table{n, kernel.dim(), {}};
  for (const auto& alpha : multi_indices_below(kernel.dim(), n))
    table.derivs[alpha] = kernel.symbol_derivative(alpha);
  return table;
}

TrigPolynomial make_g(int k, int n) {
  check_order(n);
  if (k < 0 || k >= n) throw InvalidArgument("make_g requires 0 <= k < n");
  // a_l = [x^k] L_l(x); then g_k = (2 pi i)^{-k} sum_l a_l e^{2 pi i l t}.
  const cplx inv_factor = std::pow(cplx(0.0, kTwoPi), -k);
  TrigPolynomial g(1);
  for (int l = 0; l < n; ++l) {
    const auto num = lagrange_numerator(l, n);
    std::int64_t den = 1;
    for (int i = 0; i < n; ++i)
      if (i != l) den *= (l - i);
    std::int64_t top = num[static_cast<std::size_t>(k)];
    const std::int64_t div = std::gcd(top, den);
    if (div != 0) {
      top /= div;
      den /= div;
    }
    const double rational = static_cast<double>(top) / static_cast<double>(den);
    if (rational != 0.0) g.add({l}, rational * inv_factor);
  }
  // Residual of the Vandermonde conditions d^m g / dt^m (0) = delta_{km}.
  for (int m = 0; m < n; ++m) {
    const cplx value = g.derivative_at_zero({m});
    const double scale = std::max(1.0, derivative_scale(g, {m}));
    const double residual = std::abs(value - (m == k ? 1.0 : 0.0)) / scale;
    if (residual > 1e-10) {
      std::ostringstream msg;
      msg << "g_" << k << " for n = " << n << " has residual " << residual << " at derivative " << m;
      throw IllConditioned(msg.str());
    }
  }
  return g;
}

CoefficientMap solve_T(const MomentTable& averager_table, int n) {
  check_order(n);
  CoefficientMap rhs;
  rhs[MultiIndex(static_cast<std::size_t>(averager_table.dim), 0)] = 1.0;
  return triangular_solve(averager_table, n, rhs, /*conjugate=*/true);
}

TrigPolynomial assemble_T(const CoefficientMap& c, int dim, int n) {
  check_order(n);
  std::vector<TrigPolynomial> g;
  for (int k = 0; k < n; ++k) g.push_back(make_g(k, n));

  TrigPolynomial t(dim);
  for (const auto& [alpha, value] : c) {
    if (static_cast<int>(alpha.size()) != dim) throw InvalidArgument("coefficient multi-index dimension mismatch");
    if (total_degree(alpha) >= n) throw InvalidArgument("coefficient multi-index has [alpha] >= n");
    if (value == cplx{}) continue;
    TrigPolynomial term = TrigPolynomial::constant(dim, value);
    for (int v = 0; v < dim; ++v)
      term = term * TrigPolynomial::embed(g[static_cast<std::size_t>(alpha[static_cast<std::size_t>(v)])], v, dim);
    t += term;
  }
  t.prune(0.0);
  if (t.empty()) t = TrigPolynomial::constant(dim, 0.0);

  // Round trip: D^alpha T(0) must reproduce c_alpha for every [alpha] < n.
  for (const auto& alpha : multi_indices_below(dim, n)) {
    auto it = c.find(alpha);
    const cplx want = it == c.end() ? cplx{} : it->second;
    const cplx got = t.derivative_at_zero(alpha);
    const double scale = std::max(1.0, derivative_scale(t, alpha));
    if (std::abs(got - want) > 1e-10 * scale) {
      std::ostringstream msg;
      msg << "assembled T misses its derivative target by " << std::abs(got - want);
      throw IllConditioned(msg.str());
    }
  }
  return t;
}

double defect_tolerance(const Kernel& kernel, int n) {
  double scale = 1.0;
  if (const auto* combo = std::get_if<SincCombo>(&kernel.variant())) {
    for (const auto& alpha : multi_indices_below(kernel.dim(), n))
      scale = std::max(scale, derivative_scale(combo->symbol, alpha));
  }
  return std::max(kDefectTolerance, 1e-14 * scale);
}

Kernel synthesize_kernel(const Averager& averager, int n) {
  check_order(n);
  const MomentTable table = moment_table(averager, n);
  TrigPolynomial t = assemble_T(solve_T(table, n), averager.dim(), n);
  Kernel kernel = Kernel::sinc_combo(std::move(t));
  const double defect = moment_defect(kernel, averager, n);
  const double tol = defect_tolerance(kernel, n);
  if (!(defect < tol)) {
    std::ostringstream msg;
    msg << "synthesized kernel of order " << n << " has moment defect " << defect << " (limit " << tol << ")";
    throw DefectCheckFailed(msg.str(), defect);
  }
  return kernel;
}

TrigPolynomial solve_Q(const MomentTable& kernel_table, const MomentTable& averager_table, int n) {
  check_order(n);
  if (kernel_table.dim != averager_table.dim) throw InvalidArgument("moment tables differ in dimension");
  CoefficientMap rhs;
  rhs[MultiIndex(static_cast<std::size_t>(kernel_table.dim), 0)] = 1.0;
  const CoefficientMap c_prime = triangular_solve(kernel_table, n, rhs, /*conjugate=*/true);
  // The second solve pairs Q with the unconjugated averager symbol so that
  // conj(phi-hat) Q phi-tilde-hat = 1 + O(|xi|^n); for real symbols both readings agree.
  const CoefficientMap c = triangular_solve(averager_table, n, c_prime, /*conjugate=*/false);
  return assemble_T(c, kernel_table.dim, n);
}

Averager synthesize_averager(const Kernel& kernel, const Averager& base, int n) {
  check_order(n);
  if (!kernel.has_smooth_symbol()) throw InvalidArgument("kernel symbol is not smooth at the origin");
  const TrigPolynomial q = solve_Q(moment_table(kernel, n), moment_table(base, n), n);
  Averager combo = Averager::shifted_combo(base, q);
  const double defect = moment_defect(kernel, combo, n);
  double scale = 1.0;
  for (const auto& alpha : multi_indices_below(kernel.dim(), n)) scale = std::max(scale, derivative_scale(q, alpha));
  const double tol = std::max(kDefectTolerance, 1e-14 * scale);
  if (!(defect < tol)) {
    std::ostringstream msg;
    msg << "synthesized averager of order " << n << " has moment defect " << defect << " (limit " << tol << ")";
    throw DefectCheckFailed(msg.str(), defect);
  }
  return combo;
}

double moment_defect(const AnalyticSymbol& phi_hat, const AnalyticSymbol& phi_tilde_hat, int dim, int n,
                     const ContourOptions& opts) {
  // phi-hat(xi) conj(phi-tilde-hat(conj xi)) is the analytic continuation of the real-axis product.
  auto product = [&](const CVec& xi) {
    const CVec xi_conj = xi.conjugate();
    return phi_hat(xi) * std::conj(phi_tilde_hat(xi_conj));
  };
  const MomentTable table = moment_table_contour(product, dim, n, opts);
  double worst = 0.0;
  for (const auto& [alpha, value] : table.derivs) {
    const cplx defect = (total_degree(alpha) == 0 ? 1.0 : 0.0) - value;
    worst = std::max(worst, std::abs(defect));
  }
  return worst;
}

namespace {

// exp(2 pi i l xi) on the circle of radius r behaves like exp(2 pi |l| r); the
// trapezoidal rule needs a few nodes per unit of that exponent to keep aliasing
// below rounding.
int reach(const TrigPolynomial& t) {
  int r = 0;
  for (const auto& [l, c] : t.coefficients())
    for (int v : l) r = std::max(r, std::abs(v));
  return r;
}

int reach(const Kernel& k) {
  const auto* combo = std::get_if<SincCombo>(&k.variant());
  return combo == nullptr ? 0 : reach(combo->symbol);
}

int reach(const Averager& a) {
  const auto* combo = std::get_if<ShiftedCombo>(&a.variant());
  return combo == nullptr ? 0 : reach(combo->shifts) + reach(*combo->base);
}

ContourOptions contour_for(int total_reach, const ContourOptions& opts) {
  ContourOptions out = opts;
  const double exponent = kTwoPi * opts.radius * (total_reach + 1);
  out.points = std::max(opts.points, static_cast<int>(std::ceil(5.0 * exponent)));
  return out;
}

}  // namespace

double moment_defect(const Kernel& kernel, const Averager& averager, int n, const ContourOptions& opts) {
  if (kernel.dim() != averager.dim()) throw InvalidArgument("kernel and averager differ in dimension");
  return moment_defect([&](const CVec& xi) { return kernel.germ(xi); },
                       [&](const CVec& xi) { return averager.germ(xi); }, kernel.dim(), n,
                       contour_for(reach(kernel) + reach(averager), opts));
}

double moment_defect(const Kernel& kernel, const Kernel& analysis, int n, const ContourOptions& opts) {
  if (kernel.dim() != analysis.dim()) throw InvalidArgument("kernels differ in dimension");
  return moment_defect([&](const CVec& xi) { return kernel.germ(xi); },
                       [&](const CVec& xi) { return analysis.germ(xi); }, kernel.dim(), n,
                       contour_for(reach(kernel) + reach(analysis), opts));
}

bool check_strict_compatibility(const Symbol& phi_hat, const Symbol& phi_tilde_hat, int dim, double delta,
                                int points_per_axis, double tol) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("strict compatibility radius must lie in (0, 1/2)");
  if (points_per_axis < 1) throw InvalidArgument("points_per_axis must be positive");
  std::size_t total = 1;
  for (int v = 0; v < dim; ++v) total *= static_cast<std::size_t>(points_per_axis);
  const double step = 2.0 * delta / points_per_axis;

  auto for_each_offset = [&](auto&& f) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      Vec u(dim);
      std::size_t rem = flat;
      for (int v = 0; v < dim; ++v) {
        u[v] = -delta + (static_cast<double>(rem % static_cast<std::size_t>(points_per_axis)) + 0.5) * step;
        rem /= static_cast<std::size_t>(points_per_axis);
      }
      if (u.norm() < delta && !f(u)) return false;
    }
    return true;
  };

  const bool origin_ok = for_each_offset([&](const Vec& u) {
    return std::abs(std::conj(phi_hat(u)) * phi_tilde_hat(u) - 1.0) <= tol;
  });
  if (!origin_ok) return false;

  std::size_t neighbours = 1;
  for (int v = 0; v < dim; ++v) neighbours *= 3;
  for (std::size_t flat = 0; flat < neighbours; ++flat) {
    Vec l(dim);
    std::size_t rem = flat;
    for (int v = 0; v < dim; ++v) {
      l[v] = static_cast<double>(rem % 3) - 1.0;
      rem /= 3;
    }
    if (l.isZero()) continue;
    const bool vanishes = for_each_offset([&](const Vec& u) { return std::abs(phi_hat(l + u)) <= tol; });
    if (!vanishes) return false;
  }
  return true;
}

bool check_strict_compatibility(const Kernel& kernel, const Averager& averager, double delta) {
  if (kernel.dim() != averager.dim()) throw InvalidArgument("kernel and averager differ in dimension");
  return check_strict_compatibility([&](const Vec& xi) { return kernel.fourier(xi); },
                                    [&](const Vec& xi) { return averager.fourier(xi); }, kernel.dim(), delta);
}

bool check_strict_compatibility(const Kernel& kernel, const Kernel& analysis, double delta) {
  if (kernel.dim() != analysis.dim()) throw InvalidArgument("kernels differ in dimension");
  return check_strict_compatibility([&](const Vec& xi) { return kernel.fourier(xi); },
                                    [&](const Vec& xi) { return analysis.fourier(xi); }, kernel.dim(), delta);
}

}  // namespace kks
