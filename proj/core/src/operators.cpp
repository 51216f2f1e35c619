#include "kksampling/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kksampling/errors.hpp"
#include "kksampling/parallel.hpp"
#include "kksampling/special_functions.hpp"

namespace kks {

EvalGrid::EvalGrid(Box window, int points_per_axis) : window_(std::move(window)), points_per_axis_(points_per_axis) {
  if (window_.dim() <= 0 || window_.dim() > kMaxDim || window_.upper.size() != window_.lower.size())
    throw InvalidArgument("grid window dimension out of range");
  if (points_per_axis_ < 1) throw InvalidArgument("points_per_axis must be positive");
  for (int v = 0; v < window_.dim(); ++v)
    if (!(window_.upper[v] > window_.lower[v])) throw InvalidArgument("grid window is empty");
  size_ = 1;
  for (int v = 0; v < window_.dim(); ++v) size_ *= static_cast<std::size_t>(points_per_axis_);
}

Vec EvalGrid::spacing() const { return (window_.upper - window_.lower) / points_per_axis_; }

double EvalGrid::cell_measure() const { return spacing().prod(); }

Vec EvalGrid::point(std::size_t flat) const {
  const int d = dim();
  Vec x(d);
  const Vec h = spacing();
  for (int v = d - 1; v >= 0; --v) {
    const std::size_t i = flat % static_cast<std::size_t>(points_per_axis_);
    flat /= static_cast<std::size_t>(points_per_axis_);
    x[v] = window_.lower[v] + (static_cast<double>(i) + 0.5) * h[v];
  }
  return x;
}

bool EvalGrid::same_geometry(const EvalGrid& other) const {
  return dim() == other.dim() && points_per_axis_ == other.points_per_axis_ && window_.lower == other.window_.lower &&
         window_.upper == other.window_.upper;
}

std::string to_string(TruncationMode m) { return m == TruncationMode::radius ? "radius" : "tail_tol"; }

TruncationMode truncation_mode_from_string(const std::string& s) {
  if (s == "radius") return TruncationMode::radius;
  if (s == "tail_tol") return TruncationMode::tail_tol;
  throw InvalidArgument("unknown truncation mode '" + s + "'");
}

void TruncationPolicy::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("truncation radius must be positive");
  if (mode == TruncationMode::tail_tol && !(tail_tol > 0.0)) throw InvalidArgument("tail_tol must be positive");
  if (cap == 0) throw InvalidArgument("truncation cap must be positive");
}

namespace {

// A lattice sum sum_k c_k phi(A x + k).
struct Series {
  Mat a;
  std::vector<LatticePoint> ks;
  std::vector<double> rho;  // normalized distance of the cell centre beyond the window, in [0, 1]
  std::vector<cplx> cs;
};

// Every k with -A^{-1} k inside the window expanded by radius * |A^{-1}| per axis.
Series window_union(const Mat& a, const Mat& a_inv, const Box& window, double radius, std::size_t cap,
                    const std::function<bool(const Vec&)>& keep_centre) {
  const int d = static_cast<int>(a.rows());
  const Vec centre = 0.5 * (window.lower + window.upper);
  const Vec half = 0.5 * (window.upper - window.lower);
  Vec expand(d);
  for (int v = 0; v < d; ++v) expand[v] = radius * a_inv.row(v).cwiseAbs().sum();
  const Vec outer = half + expand;

  const Vec kc = -(a * centre);
  std::vector<long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  double candidates = 1.0;
  for (int v = 0; v < d; ++v) {
    const double hw = a.row(v).cwiseAbs().dot(outer);
    lo[static_cast<std::size_t>(v)] = static_cast<long>(std::ceil(kc[v] - hw - 1e-9));
    hi[static_cast<std::size_t>(v)] = static_cast<long>(std::floor(kc[v] + hw + 1e-9));
    candidates *= static_cast<double>(hi[static_cast<std::size_t>(v)] - lo[static_cast<std::size_t>(v)] + 1);
  }
  if (candidates > 8.0 * static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "truncated lattice set has about " << candidates << " candidates, cap is " << cap;
    throw TruncationCapExceeded(msg.str());
  }

  Series s;
  s.a = a;
  LatticePoint k(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) k[static_cast<std::size_t>(v)] = static_cast<int>(lo[static_cast<std::size_t>(v)]);
  while (true) {
    const Vec u = -(a_inv * to_vec(k));
    double rho = 0.0;
    bool inside = true;
    for (int v = 0; v < d; ++v) {
      const double excess = std::abs(u[v] - centre[v]) - half[v];
      if (excess > expand[v] + 1e-9) {
        inside = false;
        break;
      }
      if (excess > 0.0) rho = std::max(rho, excess / expand[v]);
    }
    if (inside && keep_centre(u)) {
      s.ks.push_back(k);
      s.rho.push_back(std::min(rho, 1.0));
      if (s.ks.size() > cap) {
        std::ostringstream msg;
        msg << "truncated lattice set exceeds the cap of " << cap << " points";
        throw TruncationCapExceeded(msg.str());
      }
    }
    int v = d - 1;
    for (; v >= 0; --v) {
      auto& kv = k[static_cast<std::size_t>(v)];
      if (kv < hi[static_cast<std::size_t>(v)]) {
        ++kv;
        break;
      }
      kv = static_cast<int>(lo[static_cast<std::size_t>(v)]);
    }
    if (v < 0) break;
  }
  return s;
}

bool near_box(const Vec& u, const Box& box, double margin) {
  for (int v = 0; v < box.dim(); ++v)
    if (u[v] < box.lower[v] - margin || u[v] > box.upper[v] + margin) return false;
  return true;
}

void compute_coefficients(Series& s, const std::function<cplx(const LatticePoint&)>& coef) {
  s.cs.assign(s.ks.size(), cplx{});
  parallel_for(s.ks.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) s.cs[i] = coef(s.ks[i]);
  });
}

// Sampled quadrature check: the largest coefficients and an even spread of
// indices are recomputed with a refined rule.
double quadrature_check(const Series& s, const std::function<cplx(const LatticePoint&)>& refined) {
  if (s.ks.empty()) return 0.0;
  std::vector<std::size_t> order(s.ks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(s.cs[x]) > std::abs(s.cs[y]); });
  std::vector<std::size_t> picks(order.begin(), order.begin() + static_cast<long>(std::min<std::size_t>(8, order.size())));
  for (std::size_t i = 0; i < 8; ++i) picks.push_back(i * (s.ks.size() - 1) / 7);
  std::sort(picks.begin(), picks.end());
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  std::vector<double> diffs(picks.size(), 0.0);
  parallel_for(picks.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) diffs[i] = std::abs(refined(s.ks[picks[i]]) - s.cs[picks[i]]);
  });
  return *std::max_element(diffs.begin(), diffs.end());
}

// Drops the smallest coefficients while sup|phi| * sum |c| stays within tol.
double apply_tail_tolerance(Series& s, double sup_phi, double tol) {
  std::vector<std::size_t> order(s.ks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(s.cs[x]) < std::abs(s.cs[y]); });
  std::vector<char> drop(s.ks.size(), 0);
  double acc = 0.0;
  for (std::size_t i : order) {
    const double next = acc + std::abs(s.cs[i]);
    if (next * sup_phi > tol) break;
    acc = next;
    drop[i] = 1;
  }
  Series kept;
  kept.a = s.a;
  for (std::size_t i = 0; i < s.ks.size(); ++i) {
    if (drop[i]) continue;
    kept.ks.push_back(s.ks[i]);
    kept.rho.push_back(s.rho[i]);
    kept.cs.push_back(s.cs[i]);
  }
  s = std::move(kept);
  return acc * sup_phi;
}

// Evaluates sum_k c_k phi(A x + k) at every grid point.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const Series& s, const Kernel& phi) : s_(s), phi_(phi), dim_(phi.dim()) {
    if (const auto* combo = std::get_if<SincCombo>(&phi.variant())) {
      separable_ = true;
      for (const auto& [l, a] : combo->symbol.coefficients()) terms_.push_back({l, a});
    } else if (const auto* sq = std::get_if<SincSquared>(&phi.variant())) {
      separable_ = true;
      squared_scale_ = sq->scale;
      terms_.push_back({LatticePoint(static_cast<std::size_t>(dim_), 0), cplx(1.0, 0.0)});
    }
    if (separable_) {
      lo_.assign(static_cast<std::size_t>(dim_), 0);
      hi_.assign(static_cast<std::size_t>(dim_), 0);
      bool first = true;
      for (const auto& k : s_.ks)
        for (const auto& [l, a] : terms_)
          for (int v = 0; v < dim_; ++v) {
            const long idx = static_cast<long>(k[static_cast<std::size_t>(v)]) + l[static_cast<std::size_t>(v)];
            if (first || idx < lo_[static_cast<std::size_t>(v)]) lo_[static_cast<std::size_t>(v)] = idx;
            if (first || idx > hi_[static_cast<std::size_t>(v)]) hi_[static_cast<std::size_t>(v)] = idx;
            if (v == dim_ - 1) first = false;
          }
    }
  }

  void run(const EvalGrid& grid, std::vector<double>& out, ErrorBudget& budget) const {
    out.assign(grid.size(), 0.0);
    std::vector<double> leb(grid.size(), 0.0), imag(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
      std::vector<std::vector<double>> tables(static_cast<std::size_t>(dim_));
      for (std::size_t i = b; i < e; ++i) {
        const Vec z = s_.a * grid.point(i);
        cplx sum{};
        double lsum = 0.0;
        if (separable_) {
          fill_tables(z, tables);
          for (std::size_t n = 0; n < s_.ks.size(); ++n) {
            const auto& k = s_.ks[n];
            cplx value{};
            for (const auto& [l, a] : terms_) {
              double p = 1.0;
              for (int v = 0; v < dim_; ++v) {
                const long idx = static_cast<long>(k[static_cast<std::size_t>(v)]) + l[static_cast<std::size_t>(v)] -
                                 lo_[static_cast<std::size_t>(v)];
                p *= tables[static_cast<std::size_t>(v)][static_cast<std::size_t>(idx)];
              }
              value += a * p;
            }
            sum += s_.cs[n] * value;
            lsum += std::abs(value);
          }
        } else {
          for (std::size_t n = 0; n < s_.ks.size(); ++n) {
            const cplx value = phi_.evaluate_complex(z + to_vec(s_.ks[n]));
            sum += s_.cs[n] * value;
            lsum += std::abs(value);
          }
        }
        out[i] = sum.real();
        imag[i] = std::abs(sum.imag());
        leb[i] = lsum;
      }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      budget.lebesgue = std::max(budget.lebesgue, leb[i]);
      budget.imag_residual = std::max(budget.imag_residual, imag[i]);
    }
  }

 private:
  void fill_tables(const Vec& z, std::vector<std::vector<double>>& tables) const {
    for (int v = 0; v < dim_; ++v) {
      auto& t = tables[static_cast<std::size_t>(v)];
      const long lo = lo_[static_cast<std::size_t>(v)], hi = hi_[static_cast<std::size_t>(v)];
      t.resize(static_cast<std::size_t>(hi - lo + 1));
      if (squared_scale_ > 0.0) {
        for (long m = lo; m <= hi; ++m) {
          const double g = sinc((z[v] + static_cast<double>(m)) / squared_scale_);
          t[static_cast<std::size_t>(m - lo)] = g * g / squared_scale_;
        }
        continue;
      }
      // sin(pi (z + m)) = (-1)^(n + m) sin(pi e) with z = n + e.
      const double n = std::nearbyint(z[v]);
      const double e = z[v] - n;
      const double s = std::sin(kPi * e);
      const bool n_odd = std::fmod(std::abs(n), 2.0) == 1.0;
      for (long m = lo; m <= hi; ++m) {
        const double arg = e + (n + static_cast<double>(m));
        double value;
        if (std::abs(arg) < 1e-3) {
          value = sinc(arg);
        } else {
          const bool odd = n_odd != (std::abs(m) % 2 == 1);
          value = (odd ? -s : s) / (kPi * arg);
        }
        t[static_cast<std::size_t>(m - lo)] = value;
      }
    }
  }

  const Series& s_;
  const Kernel& phi_;
  int dim_;
  bool separable_ = false;
  double squared_scale_ = 0.0;
  std::vector<std::pair<LatticePoint, cplx>> terms_;
  std::vector<long> lo_, hi_;
};

GridValues finish(const EvalGrid& grid, Series& s, const Kernel& phi, const TruncationPolicy& trunc,
                  double quadrature_diff) {
  GridValues g{grid, {}, {}};
  const double sup_phi = phi.sup_bound();
  if (trunc.mode == TruncationMode::tail_tol) g.budget.truncation = apply_tail_tolerance(s, sup_phi, trunc.tail_tol);
  g.budget.lattice_points = s.ks.size();
  SeriesEvaluator(s, phi).run(grid, g.values, g.budget);

  // Last-increment estimate of the truncation error: the part of the sum
  // contributed by the outer half of the index set, on a coarse grid.
  Series outer;
  outer.a = s.a;
  for (std::size_t i = 0; i < s.ks.size(); ++i) {
    if (s.rho[i] <= 0.5) continue;
    outer.ks.push_back(s.ks[i]);
    outer.rho.push_back(s.rho[i]);
    outer.cs.push_back(s.cs[i]);
  }
  if (!outer.ks.empty()) {
    const EvalGrid coarse(grid.window(), std::min(grid.points_per_axis(), 17));
    std::vector<double> tail;
    ErrorBudget scratch;
    SeriesEvaluator(outer, phi).run(coarse, tail, scratch);
    for (double v : tail) g.budget.outer_tail = std::max(g.budget.outer_tail, std::abs(v));
  }
  g.budget.quadrature = quadrature_diff * g.budget.lebesgue;
  return g;
}

void check_dims(int expected, int got, const char* what) {
  if (expected != got) throw InvalidArgument(std::string("dimension mismatch: ") + what);
}

double cell_mean(const TestFunction& f, double a, double b, const QuadratureSpec& q) {
  std::vector<std::vector<double>> edges(1);
  for (int i = 0; i <= q.subdivisions; ++i) edges[0].push_back(a + (b - a) * i / q.subdivisions);
  edges[0].back() = b;
  for (double p : f.breakpoints)
    if (p > a && p < b) edges[0].push_back(p);
  std::sort(edges[0].begin(), edges[0].end());
  const double integral = integrate_panels(
      [&](const Vec& x) {
        const double v = f.eval(x);
        if (!std::isfinite(v)) throw EvaluationFailure("test function returned a non-finite value");
        return v;
      },
      edges, q.nodes_per_axis, q.node_budget);
  return integral / (b - a);
}

}  // namespace

GridValues sample(const TestFunction& f, const EvalGrid& grid) {
  check_dims(f.dim, grid.dim(), "function and grid");
  GridValues g{grid, std::vector<double>(grid.size()), {}};
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) g.values[i] = f.eval(grid.point(i));
  });
  return g;
}

GridValues quasi_projection(const TestFunction& f, const Kernel& phi, const Averager& averager,
                            const DilationMatrix& m, int j, const EvalGrid& grid, const TruncationPolicy& trunc,
                            const QuadratureSpec& q) {
  if (j < 0) throw InvalidArgument("quasi_projection requires j >= 0");
  trunc.validate();
  q.validate();
  check_dims(m.dim(), f.dim, "matrix and function");
  check_dims(m.dim(), phi.dim(), "matrix and kernel");
  check_dims(m.dim(), averager.dim(), "matrix and averager");
  check_dims(m.dim(), grid.dim(), "matrix and grid");

  const Mat a = m.power(j);
  const Mat a_inv = m.power(-j);
  std::function<bool(const Vec&)> keep = [](const Vec&) { return true; };
  if (f.support && averager.compact_support()) {
    // Cells M^{-j}(supp - k) lie in a ball of this radius around -M^{-j} k.
    const double reach = m.inv_power_norm(j) * averager.support_radius();
    const Box support = *f.support;
    keep = [support, reach](const Vec& u) { return near_box(u, support, reach + 1e-12); };
  }
  Series s = window_union(a, a_inv, grid.window(), trunc.radius, trunc.cap, keep);
  compute_coefficients(s, [&](const LatticePoint& k) { return coefficient(f, averager, m, j, k, q); });
  const QuadratureSpec fine = q.refined();
  const double diff =
      quadrature_check(s, [&](const LatticePoint& k) { return coefficient(f, averager, m, j, k, fine); });
  return finish(grid, s, phi, trunc, diff);
}

GridValues kantorovich_1d(const TestFunction& f, double w, const Kernel& phi, const EvalGrid& grid,
                          const TruncationPolicy& trunc, const QuadratureSpec& q, double cell_offset) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("w must be positive");
  trunc.validate();
  q.validate();
  check_dims(1, f.dim, "kantorovich_1d needs d = 1");
  check_dims(1, phi.dim(), "kantorovich_1d needs d = 1");
  check_dims(1, grid.dim(), "kantorovich_1d needs d = 1");

  // Stored index k' = -k, so that phi(w x - k) = phi(w x + k') and the cell
  // [k/w, (k+1)/w] starts at -k'/w.
  const Mat a = Mat::Constant(1, 1, w);
  const Mat a_inv = Mat::Constant(1, 1, 1.0 / w);
  std::function<bool(const Vec&)> keep = [](const Vec&) { return true; };
  if (f.support) {
    const Box support = *f.support;
    keep = [support, w, cell_offset](const Vec& u) {
      return u[0] + cell_offset <= support.upper[0] && u[0] + cell_offset + 1.0 / w >= support.lower[0];
    };
  }
  Series s = window_union(a, a_inv, grid.window(), trunc.radius, trunc.cap, keep);
  auto coef_with = [&](const QuadratureSpec& spec) {
    return [&, spec](const LatticePoint& k) -> cplx {
      const double start = -k[0] / w + cell_offset;
      return cell_mean(f, start, start + 1.0 / w, spec);
    };
  };
  compute_coefficients(s, coef_with(q));
  const double diff = quadrature_check(s, coef_with(q.refined()));
  return finish(grid, s, phi, trunc, diff);
}

GridValues generalized_sampling(const TestFunction& f, double w, const Kernel& phi, const EvalGrid& grid,
                                const TruncationPolicy& trunc, double sample_offset) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("w must be positive");
  trunc.validate();
  check_dims(1, f.dim, "generalized_sampling needs d = 1");
  check_dims(1, phi.dim(), "generalized_sampling needs d = 1");
  check_dims(1, grid.dim(), "generalized_sampling needs d = 1");

  const Mat a = Mat::Constant(1, 1, w);
  const Mat a_inv = Mat::Constant(1, 1, 1.0 / w);
  std::function<bool(const Vec&)> keep = [](const Vec&) { return true; };
  if (f.support) {
    const Box support = *f.support;
    keep = [support, sample_offset](const Vec& u) {
      return near_box(Vec(u.array() + sample_offset), support, 1e-12);
    };
  }
  Series s = window_union(a, a_inv, grid.window(), trunc.radius, trunc.cap, keep);
  compute_coefficients(s, [&](const LatticePoint& k) -> cplx {
    Vec x(1);
    x[0] = -k[0] / w + sample_offset;
    const double v = f.eval(x);
    if (!std::isfinite(v)) throw EvaluationFailure("test function returned a non-finite value");
    return v;
  });
  return finish(grid, s, phi, trunc, 0.0);
}

GridValues fourier_side_projection(const std::function<cplx(const Vec&)>& fhat, const DilationMatrix& m, int j,
                                   const EvalGrid& grid, const TruncationPolicy& trunc, const QuadratureSpec& q,
                                   const FourierHints& hints) {
  if (j < 0) throw InvalidArgument("fourier_side_projection requires j >= 0");
  trunc.validate();
  q.validate();
  check_dims(m.dim(), grid.dim(), "matrix and grid");
  const Kernel phi = Kernel::sinc(m.dim());
  Series s = window_union(m.power(j), m.power(-j), grid.window(), trunc.radius, trunc.cap,
                          [](const Vec&) { return true; });
  compute_coefficients(s, [&](const LatticePoint& k) { return fourier_coefficient(fhat, m, j, k, q, hints); });
  const QuadratureSpec fine = q.refined();
  const double diff =
      quadrature_check(s, [&](const LatticePoint& k) { return fourier_coefficient(fhat, m, j, k, fine, hints); });
  return finish(grid, s, phi, trunc, diff);
}

GridValues fourier_side_projection(const TestFunction& f, const DilationMatrix& m, int j, const EvalGrid& grid,
                                   const TruncationPolicy& trunc, const QuadratureSpec& q) {
  if (!f.has_fourier()) throw InvalidArgument("function '" + f.id + "' has no Fourier transform");
  check_dims(m.dim(), f.dim, "matrix and function");
  FourierHints hints;
  if (f.band_limit) hints.band_limit = *f.band_limit;
  hints.kinks = f.fourier_kinks;
  return fourier_side_projection(f.fourier, m, j, grid, trunc, q, hints);
}

}  // namespace kks
