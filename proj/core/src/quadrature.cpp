#include "kksampling/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "kksampling/errors.hpp"
#include "kksampling/special_functions.hpp"

namespace kks {

std::string to_string(QuadratureRule r) {
  switch (r) {
    case QuadratureRule::automatic:
      return "automatic";
    case QuadratureRule::tensor_gauss_legendre:
      return "tensor_gauss_legendre";
    case QuadratureRule::tensor_polar:
      return "tensor_polar";
  }
  return "automatic";
}

QuadratureRule quadrature_rule_from_string(const std::string& s) {
  if (s == "automatic") return QuadratureRule::automatic;
  if (s == "tensor_gauss_legendre") return QuadratureRule::tensor_gauss_legendre;
  if (s == "tensor_polar") return QuadratureRule::tensor_polar;
  throw InvalidArgument("unknown quadrature rule '" + s + "'");
}

void QuadratureSpec::validate() const {
  if (nodes_per_axis < 2) throw InvalidArgument("nodes_per_axis must be at least 2");
  if (subdivisions < 1) throw InvalidArgument("subdivisions must be positive");
  if (radial_nodes < 2 || angular_nodes < 3) throw InvalidArgument("polar rule needs radial >= 2, angular >= 3");
  if (node_budget == 0) throw InvalidArgument("node_budget must be positive");
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec r = *this;
  r.nodes_per_axis *= 2;
  r.radial_nodes *= 2;
  r.angular_nodes *= 2;
  r.node_budget *= 1u << 4;
  return r;
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 4096) throw InvalidArgument("Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->nodes[static_cast<std::size_t>(i)] = -x;
    rule->nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule->weights[static_cast<std::size_t>(i)] = w;
    rule->weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule->nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  slot = std::move(rule);
  return *slot;
}

namespace {

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

AxisRule axis_rule(const std::vector<double>& edges, int nodes) {
  const GaussRule& g = gauss_legendre(nodes);
  AxisRule r;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      r.x.push_back(mid + half * g.nodes[i]);
      r.w.push_back(half * g.weights[i]);
    }
  }
  return r;
}

template <typename T, typename F>
T tensor_sum(const F& f, const std::vector<std::vector<double>>& edges, int nodes, std::size_t budget) {
  const int dim = static_cast<int>(edges.size());
  if (dim <= 0 || dim > kMaxDim) throw InvalidArgument("integration dimension out of range");
  std::vector<AxisRule> axes;
  double total = 1.0;
  for (const auto& e : edges) {
    axes.push_back(axis_rule(e, nodes));
    total *= static_cast<double>(axes.back().x.size());
  }
  if (total > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "quadrature needs " << total << " nodes, budget is " << budget;
    throw BudgetExceeded(msg.str());
  }
  if (total == 0.0) return T{};
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  Vec x(dim);
  T sum{};
  while (true) {
    double w = 1.0;
    for (int v = 0; v < dim; ++v) {
      x[v] = axes[static_cast<std::size_t>(v)].x[idx[static_cast<std::size_t>(v)]];
      w *= axes[static_cast<std::size_t>(v)].w[idx[static_cast<std::size_t>(v)]];
    }
    sum += w * f(x);
    int v = 0;
    for (; v < dim; ++v) {
      auto& i = idx[static_cast<std::size_t>(v)];
      if (++i < axes[static_cast<std::size_t>(v)].x.size()) break;
      i = 0;
    }
    if (v == dim) break;
  }
  return sum;
}

std::vector<double> uniform_edges(double a, double b, int panels) {
  std::vector<double> e(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) e[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
  e.back() = b;
  return e;
}

void insert_edges(std::vector<double>& edges, const std::vector<double>& points) {
  const double a = edges.front(), b = edges.back();
  for (double p : points)
    if (p > a && p < b) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// Breakpoints often carry endpoint singularities of a derivative, so panels
// shrink geometrically towards each one.
void insert_graded_edges(std::vector<double>& edges, const std::vector<double>& points, int subdivisions) {
  constexpr int kLevels = 4;
  const double a = edges.front(), b = edges.back();
  const double width = (b - a) / subdivisions;
  std::vector<double> extra;
  for (double p : points) {
    if (p < a || p > b) continue;
    extra.push_back(p);
    for (int i = 1; i <= kLevels; ++i) {
      const double step = std::ldexp(width, -i);
      extra.push_back(p - step);
      extra.push_back(p + step);
    }
  }
  insert_edges(edges, extra);
}

double checked(double v) {
  if (!std::isfinite(v)) throw EvaluationFailure("test function returned a non-finite value");
  return v;
}

cplx box_mean(const TestFunction& f, const Vec& lower, const Vec& upper, const Mat& inv_power, const Vec& kv,
              double scale_1d, const QuadratureSpec& q) {
  const int dim = f.dim;
  std::vector<std::vector<double>> edges;
  for (int v = 0; v < dim; ++v) edges.push_back(uniform_edges(lower[v], upper[v], q.subdivisions));
  if (dim == 1 && !f.breakpoints.empty()) {
    // t = M^j b + k maps a breakpoint of f into the averager's coordinates.
    std::vector<double> mapped;
    for (double b : f.breakpoints) mapped.push_back(scale_1d * b + kv[0]);
    insert_graded_edges(edges[0], mapped, q.subdivisions);
  }
  double measure = 1.0;
  for (int v = 0; v < dim; ++v) measure *= upper[v] - lower[v];
  const double integral = tensor_sum<double>(
      [&](const Vec& t) { return checked(f.eval(inv_power * (t - kv))); }, edges, q.nodes_per_axis, q.node_budget);
  return integral / measure;
}

cplx disk_mean(const TestFunction& f, double radius, const Mat& inv_power, const Vec& kv, const QuadratureSpec& q) {
  const double integral = integrate_disk(
      [&](const Vec& t) { return checked(f.eval(inv_power * (t - kv))); }, Vec::Zero(2), radius, q);
  return integral / (kPi * radius * radius);
}

cplx sinc_spatial(const TestFunction& f, const DilationMatrix& m, int j, const Vec& kv, const QuadratureSpec& q) {
  const int dim = f.dim;
  const Mat p = m.power(j);
  const Box& s = *f.support;
  std::vector<std::vector<double>> edges;
  for (int v = 0; v < dim; ++v) {
    // Each panel moves every coordinate of M^j u + k by at most one unit.
    const double width = s.upper[v] - s.lower[v];
    const double speed = p.col(v).cwiseAbs().sum();
    const int panels = std::max(q.subdivisions, static_cast<int>(std::ceil(width * speed)));
    edges.push_back(uniform_edges(s.lower[v], s.upper[v], panels));
  }
  if (dim == 1) insert_graded_edges(edges[0], f.breakpoints, static_cast<int>(edges[0].size()) - 1);
  const double integral = tensor_sum<double>(
      [&](const Vec& u) { return checked(f.eval(u)) * sinc(Vec(p * u + kv)); }, edges, q.nodes_per_axis,
      q.node_budget);
  return std::pow(m.det_abs(), j) * integral;
}

}  // namespace

double integrate_panels(const std::function<double(const Vec&)>& f, const std::vector<std::vector<double>>& edges,
                        int nodes, std::size_t budget) {
  return tensor_sum<double>(f, edges, nodes, budget);
}

cplx integrate_panels_complex(const std::function<cplx(const Vec&)>& f,
                              const std::vector<std::vector<double>>& edges, int nodes, std::size_t budget) {
  return tensor_sum<cplx>(f, edges, nodes, budget);
}

double integrate_box(const std::function<double(const Vec&)>& f, const Box& box, const QuadratureSpec& q) {
  q.validate();
  std::vector<std::vector<double>> edges;
  for (int v = 0; v < box.dim(); ++v) edges.push_back(uniform_edges(box.lower[v], box.upper[v], q.subdivisions));
  return tensor_sum<double>(f, edges, q.nodes_per_axis, q.node_budget);
}

double integrate_disk(const std::function<double(const Vec&)>& f, const Vec& center, double radius,
                      const QuadratureSpec& q) {
  q.validate();
  if (center.size() != 2) throw InvalidArgument("disk quadrature is two-dimensional");
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  const std::size_t total = static_cast<std::size_t>(q.radial_nodes) * static_cast<std::size_t>(q.angular_nodes);
  if (total > q.node_budget) throw BudgetExceeded("polar quadrature exceeds the node budget");
  const GaussRule& g = gauss_legendre(q.radial_nodes);
  const double r2 = radius * radius;
  const double dtheta = kTwoPi / q.angular_nodes;
  double sum = 0.0;
  Vec x(2);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = 0.5 * r2 * (g.nodes[i] + 1.0);
    const double r = std::sqrt(s);
    // dA = r dr dtheta = (1/2) ds dtheta
    const double w = 0.5 * (0.5 * r2 * g.weights[i]) * dtheta;
    double ring = 0.0;
    for (int a = 0; a < q.angular_nodes; ++a) {
      const double th = dtheta * a;
      x[0] = center[0] + r * std::cos(th);
      x[1] = center[1] + r * std::sin(th);
      ring += f(x);
    }
    sum += w * ring;
  }
  return sum;
}

cplx coefficient(const TestFunction& f, const Averager& averager, const DilationMatrix& m, int j,
                 const LatticePoint& k, const QuadratureSpec& q) {
  q.validate();
  if (f.dim != averager.dim() || f.dim != m.dim() || static_cast<int>(k.size()) != f.dim)
    throw InvalidArgument("coefficient: dimension mismatch");
  const Vec kv = to_vec(k);
  return std::visit(
      [&](const auto& a) -> cplx {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, BoxIndicator>) {
          if (q.rule == QuadratureRule::tensor_polar) throw InvalidArgument("polar rule requested for a box averager");
          const double scale = f.dim == 1 ? m.power(j)(0, 0) : 1.0;
          return box_mean(f, a.lower, a.upper, m.power(-j), kv, scale, q);
        } else if constexpr (std::is_same_v<A, BallIndicator>) {
          if (a.dim == 1) {
            Vec lo = Vec::Constant(1, -a.radius), hi = Vec::Constant(1, a.radius);
            return box_mean(f, lo, hi, m.power(-j), kv, m.power(j)(0, 0), q);
          }
          if (q.rule == QuadratureRule::tensor_gauss_legendre)
            throw InvalidArgument("tensor Gauss-Legendre requested for a ball averager");
          return disk_mean(f, a.radius, m.power(-j), kv, q);
        } else if constexpr (std::is_same_v<A, ShiftedCombo>) {
          cplx sum{};
          for (const auto& [l, b] : a.shifts.coefficients()) {
            LatticePoint kl = k;
            for (std::size_t i = 0; i < kl.size(); ++i) kl[i] += l[i];
            sum += std::conj(b) * coefficient(f, *a.base, m, j, kl, q);
          }
          return sum;
        } else {
          if (f.support) return sinc_spatial(f, m, j, kv, q);
          if (f.has_fourier()) return fourier_coefficient(f, m, j, k, q);
          throw InvalidArgument("sinc averager needs a compactly supported f or a Fourier transform");
        }
      },
      averager.variant());
}

cplx fourier_coefficient(const std::function<cplx(const Vec&)>& fhat, const DilationMatrix& m, int j,
                         const LatticePoint& k, const QuadratureSpec& q, const FourierHints& hints) {
  q.validate();
  const int dim = m.dim();
  if (static_cast<int>(k.size()) != dim) throw InvalidArgument("fourier_coefficient: dimension mismatch");
  const Mat a = m.adjoint_power(j);
  const Vec kv = to_vec(k);
  std::vector<std::vector<double>> edges;
  for (int v = 0; v < dim; ++v) {
    double lo = -0.5, hi = 0.5;
    if (m.is_diagonal() && std::isfinite(hints.band_limit)) {
      const double reach = hints.band_limit / std::abs(a(v, v));
      lo = std::max(lo, -reach);
      hi = std::min(hi, reach);
    }
    if (!(hi > lo)) return cplx{};
    const double width = hi - lo;
    // Panels span at most one unit of xi and four periods of exp(-2 pi i k eta).
    const double speed = a.col(v).cwiseAbs().sum();
    const int panels = std::max({q.subdivisions, static_cast<int>(std::ceil(width * speed)),
                                 static_cast<int>(std::ceil(width * std::abs(kv[v]) / 4.0))});
    edges.push_back(uniform_edges(lo, hi, panels));
    if (m.is_diagonal()) {
      std::vector<double> mapped;
      for (double kink : hints.kinks) mapped.push_back(kink / a(v, v));
      insert_edges(edges.back(), mapped);
    }
  }
  const cplx integral = tensor_sum<cplx>(
      [&](const Vec& eta) { return fhat(Vec(a * eta)) * std::polar(1.0, -kTwoPi * kv.dot(eta)); }, edges,
      q.nodes_per_axis, q.node_budget);
  return std::pow(m.det_abs(), j) * integral;
}

cplx fourier_coefficient(const TestFunction& f, const DilationMatrix& m, int j, const LatticePoint& k,
                         const QuadratureSpec& q) {
  if (!f.has_fourier()) throw InvalidArgument("function '" + f.id + "' has no Fourier transform");
  FourierHints hints;
  if (f.band_limit) hints.band_limit = *f.band_limit;
  hints.kinks = f.fourier_kinks;
  return fourier_coefficient(f.fourier, m, j, k, q, hints);
}

}  // namespace kks
