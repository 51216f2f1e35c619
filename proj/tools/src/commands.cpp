#include "kksampling/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "kksampling/analysis.hpp"
#include "kksampling/errors.hpp"
#include "kksampling/synthesis.hpp"

namespace kks::cli {

namespace {

using nlohmann::json;

// Library validation errors become key-addressed config errors.
template <typename F>
auto keyed(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const kks::InvalidArgument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  } catch (const kks::NonExpansiveMatrix& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

DilationMatrix build_matrix(const Config& c) {
  return keyed("dilation.matrix", [&] {
    const auto v = c.reals("dilation.matrix");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != static_cast<int>(v.size())) throw kks::InvalidArgument("entry count is not a square");
    return DilationMatrix::from_rows(d, v);
  });
}

Vec axis_values(const Config& c, const std::string& key, int dim) {
  const auto v = c.reals(key);
  if (v.size() == 1) return Vec::Constant(dim, v[0]);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError("key '" + key + "' needs 1 or " + std::to_string(dim) + " values");
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

Averager base_averager(const Config& c, const std::string& type, int dim, const std::string& key) {
  if (type == "box")
    return keyed(key, [&] { return Averager::box(axis_values(c, "averager.lower", dim), axis_values(c, "averager.upper", dim)); });
  if (type == "ball") return keyed(key, [&] { return Averager::ball(dim, c.real("averager.radius")); });
  if (type == "sinc") return Averager::sinc(dim);
  throw ConfigError("key '" + key + "': unknown averager '" + type + "'");
}

struct Pair {
  Kernel kernel;
  Averager averager;
};

Kernel plain_kernel(const Config& c, int dim) {
  const std::string type = c.str("kernel.type");
  if (type == "sinc") return Kernel::sinc(dim);
  if (type == "sinc_squared") return keyed("kernel.scale", [&] { return Kernel::sinc_squared(dim, c.real("kernel.scale")); });
  if (type == "bochner_riesz")
    return keyed("kernel.delta", [&] { return Kernel::bochner_riesz(dim, c.real("kernel.delta")); });
  if (type == "synthesized") throw ConfigError("key 'kernel.type': synthesized kernels need a box, ball or sinc averager");
  throw ConfigError("key 'kernel.type': unknown kernel '" + type + "'");
}

Pair build_pair(const Config& c, int dim) {
  const std::string avg_type = c.str("averager.type");
  if (avg_type == "matched") {
    Kernel k = plain_kernel(c, dim);
    const Averager base = base_averager(c, c.str("averager.base"), dim, "averager.base");
    const int n = c.integer("averager.order");
    Averager a = keyed("averager.order", [&] { return synthesize_averager(k, base, n); });
    return {std::move(k), std::move(a)};
  }
  Averager a = base_averager(c, avg_type, dim, "averager.type");
  if (c.str("kernel.type") == "synthesized") {
    const int n = c.integer("kernel.order");
    Kernel k = keyed("kernel.order", [&] { return synthesize_kernel(a, n); });
    return {std::move(k), std::move(a)};
  }
  return {plain_kernel(c, dim), std::move(a)};
}

TestFunction build_function(const Config& c, int dim) {
  const std::string id = c.str("run.function");
  if (id == "zero") return zero_function(dim);
  const TestFunction& f = keyed("run.function", [&]() -> const TestFunction& { return corpus_function(id); });
  if (f.dim != dim)
    throw ConfigError("key 'run.function': '" + id + "' is " + std::to_string(f.dim) +
                      "-dimensional but the dilation matrix is " + std::to_string(dim) + "-dimensional");
  return f;
}

Box build_window(const Config& c, int dim) {
  Box b{axis_values(c, "grid.lower", dim), axis_values(c, "grid.upper", dim)};
  for (int v = 0; v < dim; ++v)
    if (!(b.upper[v] > b.lower[v])) throw ConfigError("key 'grid.upper': window is empty");
  return b;
}

QuadratureSpec build_quadrature(const Config& c) {
  QuadratureSpec q;
  q.rule = keyed("quadrature.rule", [&] { return quadrature_rule_from_string(c.str("quadrature.rule")); });
  q.nodes_per_axis = c.integer("quadrature.nodes_per_axis");
  q.subdivisions = c.integer("quadrature.subdivisions");
  q.radial_nodes = c.integer("quadrature.radial_nodes");
  q.angular_nodes = c.integer("quadrature.angular_nodes");
  const double budget = c.real("quadrature.node_budget");
  if (!(budget >= 1.0)) throw ConfigError("key 'quadrature.node_budget' must be positive");
  q.node_budget = static_cast<std::size_t>(budget);
  keyed("quadrature", [&] {
    q.validate();
    return 0;
  });
  return q;
}

TruncationPolicy build_truncation(const Config& c) {
  TruncationPolicy t;
  t.mode = keyed("truncation.mode", [&] { return truncation_mode_from_string(c.str("truncation.mode")); });
  t.radius = c.real("truncation.radius");
  t.tail_tol = c.real("truncation.tail_tol");
  const double cap = c.real("truncation.cap");
  if (!(cap >= 1.0)) throw ConfigError("key 'truncation.cap' must be positive");
  t.cap = static_cast<std::size_t>(cap);
  keyed("truncation", [&] {
    t.validate();
    return 0;
  });
  return t;
}

double build_p(const Config& c) {
  const double p = c.real("run.p");
  if (!(p >= 1.0)) throw ConfigError("key 'run.p' must be at least 1 or inf");
  return p;
}

std::string out_name(const Config& c, const std::string& key, const std::string& fallback) {
  const std::string v = c.str(key);
  return v.empty() ? fallback : v;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kks::Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string config_comment(const Config& c) {
  std::ostringstream out;
  for (const auto& [k, v] : c.resolved()) out << "# " << k << " = " << v << "\n";
  return out.str();
}

json defect_or_null(const Kernel& k, const Averager& a, int n) {
  if (!k.has_smooth_symbol()) return nullptr;
  return moment_defect(k, a, n);
}

// Largest delta in the sweep for which the pair is strictly compatible (0 if none).
double compatibility_sweep(const Kernel& k, const Averager& a, json* rows) {
  double best = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double delta = 0.05 * i;
    const bool ok = check_strict_compatibility(k, a, delta);
    if (rows) rows->push_back({{"delta", delta}, {"compatible", ok}});
    if (ok) best = delta;
  }
  return best;
}

bool is_centered_unit_box(const Averager& a) {
  const auto* b = std::get_if<BoxIndicator>(&a.variant());
  if (!b) return false;
  return b->lower.isApproxToConstant(-0.5, 0.0) && b->upper.isApproxToConstant(0.5, 0.0);
}

bool is_unit_ball(const Averager& a) {
  const auto* b = std::get_if<BallIndicator>(&a.variant());
  return b && b->radius == 1.0 && b->dim == 2;
}

// Reference order-4 coefficients for the centred box (d = 1, 2) and the unit disk.
std::optional<TrigPolynomial> reference_symbol(const Averager& a, int n) {
  if (n != 4) return std::nullopt;
  const double tail[3] = {5.0 / 24.0, -1.0 / 6.0, 1.0 / 24.0};
  if (is_centered_unit_box(a) && a.dim() == 1) {
    TrigPolynomial t(1);
    t.add({0}, 11.0 / 12.0);
    for (int l = 1; l <= 3; ++l) t.add({l}, tail[l - 1]);
    return t;
  }
  if (is_centered_unit_box(a) && a.dim() == 2) {
    TrigPolynomial t(2);
    t.add({0, 0}, 5.0 / 6.0);
    for (int l = 1; l <= 3; ++l) {
      t.add({l, 0}, tail[l - 1]);
      t.add({0, l}, tail[l - 1]);
    }
    return t;
  }
  if (is_unit_ball(a)) {
    // Reference form 1 - pi^2 (g_2(xi_1) + g_2(xi_2)).
    const double ref_tail[3] = {-5.0 / 8.0, 1.0 / 2.0, -1.0 / 8.0};
    TrigPolynomial t(2);
    t.add({0, 0}, 3.0 / 2.0);
    for (int l = 1; l <= 3; ++l) {
      t.add({l, 0}, ref_tail[l - 1]);
      t.add({0, l}, ref_tail[l - 1]);
    }
    return t;
  }
  return std::nullopt;
}

json reference_comparison(const Averager& a, int n, const TrigPolynomial& derived) {
  const auto ref = reference_symbol(a, n);
  if (!ref) return nullptr;
  double diff = 0.0;
  json rows = json::array();
  std::map<LatticePoint, int> keys;
  for (const auto& [l, v] : ref->coefficients()) keys[l] = 1;
  for (const auto& [l, v] : derived.coefficients()) keys[l] = 1;
  for (const auto& [l, unused] : keys) {
    const cplx r = ref->coefficient(l), d = derived.coefficient(l);
    diff = std::max(diff, std::abs(r - d));
    rows.push_back({{"shift", l}, {"reference", r.real()}, {"derived", d.real()}});
  }
  const Kernel ref_kernel = Kernel::sinc_combo(*ref);
  return {{"coefficients", rows},
          {"max_abs_difference", diff},
          {"matches", diff < 1e-12},
          {"reference_defect", moment_defect(ref_kernel, a, n)}};
}

}  // namespace

CommandResult cmd_synthesize(const Config& c, const std::string& out_dir) {
  const DilationMatrix m = build_matrix(c);
  const int dim = m.dim();
  const std::string avg_type = c.str("averager.type");
  if (avg_type == "matched") throw ConfigError("key 'averager.type': synthesize needs a box, ball or sinc averager");
  const Averager a = base_averager(c, avg_type, dim, "averager.type");
  const int n = c.integer("kernel.order");
  if (n < 1 || n > kMaxOrder) throw ConfigError("key 'kernel.order' must lie in 1..8");

  CommandResult r;
  r.report = {{"command", "synthesize"}, {"averager", a.to_json()}, {"order", n}};
  try {
    const Kernel k = synthesize_kernel(a, n);
    r.report["kernel"] = k.to_json();
    r.report["defect"] = {{"order", n},
                          {"value", moment_defect(k, a, n)},
                          {"tolerance", defect_tolerance(k, n)},
                          {"next_order_value", moment_defect(k, a, n + 1)}};
    r.report["reference_comparison"] = reference_comparison(a, n, std::get<SincCombo>(k.variant()).symbol);
  } catch (const DefectCheckFailed& e) {
    r.exit_code = kExitError;
    r.report["error"] = e.what();
    r.report["defect"] = {{"order", n}, {"value", e.defect()}};
  }
  write_file(out_dir, out_name(c, "output.json", "synthesize.json"), r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_verify(const Config& c, const std::string& out_dir) {
  const DilationMatrix m = build_matrix(c);
  const Pair pair = build_pair(c, m.dim());
  const int max_order = c.integer("verify.max_order");
  if (max_order < 1 || max_order > 12) throw ConfigError("key 'verify.max_order' must lie in 1..12");

  CommandResult r;
  json sweep = json::array();
  const double largest = compatibility_sweep(pair.kernel, pair.averager, &sweep);
  json defects = json::array();
  int order = 0;
  bool counting = true;
  for (int n = 1; n <= max_order; ++n) {
    const json d = defect_or_null(pair.kernel, pair.averager, n);
    defects.push_back({{"order", n}, {"defect", d}});
    if (counting && d.is_number() && d.get<double>() < kDefectTolerance)
      order = n;
    else
      counting = false;
  }
  r.report = {{"command", "verify"},
              {"kernel", pair.kernel.to_json()},
              {"averager", pair.averager.to_json()},
              {"strict_compatibility", {{"sweep", sweep}, {"largest_delta", largest}, {"compatible", largest > 0.0}}},
              {"moment_defects", defects},
              {"approximation_order", pair.kernel.has_smooth_symbol() ? json(order) : json(nullptr)},
              {"decay_class", to_string(pair.kernel.decay_class())}};
  const int expect = c.integer("verify.expect_order");
  if (expect > 0) {
    const bool ok = order == expect;
    r.report["expected_order"] = expect;
    r.report["passed"] = ok;
    if (!ok) r.exit_code = kExitFail;
  }
  write_file(out_dir, out_name(c, "output.json", "verify.json"), r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_converge(const Config& c, const std::string& out_dir) {
  const DilationMatrix m = build_matrix(c);
  const int dim = m.dim();
  ConvergencePlan plan;
  plan.m = m;
  plan.op = keyed("run.operator", [&] { return operator_kind_from_string(c.str("run.operator")); });
  plan.f = build_function(c, dim);
  if (plan.op == OperatorKind::quasi_projection) {
    Pair pair = build_pair(c, dim);
    plan.phi = std::move(pair.kernel);
    plan.averager = std::move(pair.averager);
  } else if (plan.op != OperatorKind::fourier_side) {
    plan.phi = plain_kernel(c, dim);
  }
  plan.j_min = c.integer("run.j_min");
  plan.j_max = c.integer("run.j_max");
  if (plan.j_min < 0 || plan.j_max < plan.j_min) throw ConfigError("key 'run.j_max': need 0 <= j_min <= j_max");
  plan.p = build_p(c);
  plan.window = build_window(c, dim);
  plan.points_per_cell = c.real("grid.points_per_cell");
  plan.min_points_per_axis = c.integer("grid.min_points");
  if (!(plan.points_per_cell > 0.0) || plan.min_points_per_axis < 1)
    throw ConfigError("key 'grid.points_per_cell': grid density must be positive");
  plan.trunc = build_truncation(c);
  plan.q = build_quadrature(c);
  plan.modulus_order = c.integer("modulus.order");
  if (plan.modulus_order < 1) throw ConfigError("key 'modulus.order' must be positive");
  plan.sampling.radii = c.integer("modulus.radii");
  plan.sampling.directions = c.integer("modulus.directions");
  plan.config = c.resolved();

  const ConvergenceReport report = run_convergence(plan);
  write_file(out_dir, out_name(c, "output.csv", "converge.csv"), report.to_csv());

  CommandResult r;
  r.report = report.summary();
  r.report["command"] = "converge";
  const double expect = c.real("converge.expect_order");
  if (!std::isnan(expect)) {
    const bool ok = std::abs(report.fitted_order - expect) <= c.real("converge.tolerance");
    r.report["expected_order"] = expect;
    r.report["passed"] = ok;
    if (!ok) r.exit_code = kExitFail;
  }
  write_file(out_dir, out_name(c, "output.json", "converge.json"), r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_reproduce(const Config& c, const std::string& out_dir) {
  const DilationMatrix m = build_matrix(c);
  const int dim = m.dim();
  const TestFunction f = build_function(c, dim);
  const Pair pair = build_pair(c, dim);
  const int j = c.integer("run.j");
  if (j < 0) throw ConfigError("key 'run.j' must be non-negative");
  const int points = c.integer("grid.points");
  if (points < 1) throw ConfigError("key 'grid.points' must be positive");
  const EvalGrid grid(build_window(c, dim), points);
  const double tol = c.real("reproduce.tolerance");

  const double delta = compatibility_sweep(pair.kernel, pair.averager, nullptr);
  // supp f-hat inside {|M*^{-j} xi| < delta}.
  const bool in_hypothesis =
      f.band_limit.has_value() && delta > 0.0 && *f.band_limit * std::sqrt(double(dim)) * m.inv_power_norm(j) < delta;

  const GridValues approx =
      quasi_projection(f, pair.kernel, pair.averager, m, j, grid, build_truncation(c), build_quadrature(c));
  const GridValues exact = sample(f, grid);
  const double err = lp_distance(approx, exact, std::numeric_limits<double>::infinity());

  std::ostringstream csv;
  csv << config_comment(c);
  for (int v = 0; v < dim; ++v) csv << "x" << v + 1 << ",";
  csv << "value,reference,abs_error\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.point(i);
    for (int v = 0; v < dim; ++v) csv << format_double(x[v]) << ",";
    csv << format_double(approx.values[i]) << "," << format_double(exact.values[i]) << ","
        << format_double(std::abs(approx.values[i] - exact.values[i])) << "\n";
  }
  write_file(out_dir, out_name(c, "output.csv", "reproduce.csv"), csv.str());

  CommandResult r;
  const bool passed = err < tol;
  r.report = {{"command", "reproduce"},
              {"function", f.id},
              {"j", j},
              {"max_abs_error", err},
              {"tolerance", tol},
              {"budget", approx.budget.total()},
              {"strict_compatibility_delta", delta},
              {"in_hypothesis", in_hypothesis},
              {"passed", passed}};
  if (in_hypothesis && !passed) r.exit_code = kExitFail;
  write_file(out_dir, out_name(c, "output.json", "reproduce.json"), r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_compare(const Config& c, const std::string& out_dir) {
  const DilationMatrix m = build_matrix(c);
  if (m.dim() != 1) throw ConfigError("key 'dilation.matrix': compare is one-dimensional");
  const TestFunction f = build_function(c, 1);
  const Kernel phi = plain_kernel(c, 1);
  const double p = build_p(c);
  const Box window = build_window(c, 1);
  const TruncationPolicy trunc = build_truncation(c);
  const QuadratureSpec q = build_quadrature(c);
  const double jitter = c.real("compare.jitter");
  const auto ws = c.reals("compare.w");
  const int base_points = c.integer("grid.points");

  std::ostringstream csv;
  csv << config_comment(c) << "w,kw_error,sw_error,kw_jitter,sw_jitter\n";
  json rows = json::array();
  std::vector<std::pair<double, double>> k_errors, s_errors;
  double jitter_ratio = std::numeric_limits<double>::infinity();
  for (double w : ws) {
    if (!(w > 0.0)) throw ConfigError("key 'compare.w': factors must be positive");
    const double width = window.upper[0] - window.lower[0];
    const EvalGrid grid(window, std::max(base_points, static_cast<int>(std::ceil(4.0 * w * width))));
    const GridValues exact = sample(f, grid);
    const GridValues kw = kantorovich_1d(f, w, phi, grid, trunc, q);
    const GridValues sw = generalized_sampling(f, w, phi, grid, trunc);
    double kj = 0.0, sj = 0.0;
    for (double sign : {-1.0, 1.0}) {
      kj = std::max(kj, lp_distance(kantorovich_1d(f, w, phi, grid, trunc, q, sign * jitter / w), kw, p));
      sj = std::max(sj, lp_distance(generalized_sampling(f, w, phi, grid, trunc, sign * jitter / w), sw, p));
    }
    const double ke = lp_distance(kw, exact, p), se = lp_distance(sw, exact, p);
    k_errors.emplace_back(1.0 / w, ke);
    s_errors.emplace_back(1.0 / w, se);
    if (kj > 0.0) jitter_ratio = std::min(jitter_ratio, sj / kj);
    csv << format_double(w) << "," << format_double(ke) << "," << format_double(se) << "," << format_double(kj) << ","
        << format_double(sj) << "\n";
    rows.push_back({{"w", w}, {"kw_error", ke}, {"sw_error", se}, {"kw_jitter", kj}, {"sw_jitter", sj}});
  }
  write_file(out_dir, out_name(c, "output.csv", "compare.csv"), csv.str());

  auto order_or_null = [](const std::vector<std::pair<double, double>>& e) -> json {
    try {
      return fit_order(e).slope;
    } catch (const kks::InvalidArgument&) {
      return nullptr;
    }
  };
  CommandResult r;
  r.report = {{"command", "compare"},
              {"function", f.id},
              {"p", p},
              {"rows", rows},
              {"kw_order", order_or_null(k_errors)},
              {"sw_order", order_or_null(s_errors)},
              {"jitter_ratio", std::isinf(jitter_ratio) ? json(nullptr) : json(jitter_ratio)}};
  write_file(out_dir, out_name(c, "output.json", "compare.json"), r.report.dump(2) + "\n");
  return r;
}

CommandResult run_command(const std::string& name, const Config& config, const std::string& out_dir) {
  if (name == "synthesize") return cmd_synthesize(config, out_dir);
  if (name == "verify") return cmd_verify(config, out_dir);
  if (name == "converge") return cmd_converge(config, out_dir);
  if (name == "reproduce") return cmd_reproduce(config, out_dir);
  if (name == "compare") return cmd_compare(config, out_dir);
  throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace kks::cli
