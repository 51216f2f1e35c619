#include "kksampling/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace kks::cli {

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = {
      {"run.function", "gaussian", "corpus function id"},
      {"run.operator", "quasi_projection", "quasi_projection | kantorovich | sampling | fourier_side"},
      {"run.j", "1", "level for reproduce"},
      {"run.j_min", "3", "first level of a convergence sweep"},
      {"run.j_max", "7", "last level of a convergence sweep"},
      {"run.p", "2", "L_p exponent; inf for the max norm"},
      {"dilation.matrix", "2", "row-major entries of M; the count must be a square"},
      {"kernel.type", "sinc", "sinc | synthesized | sinc_squared | bochner_riesz"},
      {"kernel.order", "4", "approximation order n for synthesized kernels and synthesize"},
      {"kernel.scale", "2", "sinc_squared scale s"},
      {"kernel.delta", "1", "bochner_riesz exponent"},
      {"averager.type", "box", "box | ball | sinc | matched"},
      {"averager.lower", "-0.5", "box lower corner (one value or one per axis)"},
      {"averager.upper", "0.5", "box upper corner (one value or one per axis)"},
      {"averager.radius", "1", "ball radius"},
      {"averager.base", "box", "base averager of a matched combination: box | ball"},
      {"averager.order", "2", "order n of a matched combination"},
      {"grid.lower", "-4", "window lower corner (one value or one per axis)"},
      {"grid.upper", "4", "window upper corner (one value or one per axis)"},
      {"grid.points", "257", "points per axis for reproduce and compare"},
      {"grid.points_per_cell", "8", "points per level-j cell length in convergence sweeps"},
      {"grid.min_points", "64", "lower bound on points per axis in convergence sweeps"},
      {"quadrature.rule", "automatic", "automatic | tensor_gauss_legendre | tensor_polar"},
      {"quadrature.nodes_per_axis", "24", "Gauss-Legendre nodes per panel"},
      {"quadrature.subdivisions", "2", "panels per axis"},
      {"quadrature.radial_nodes", "32", "polar rule nodes in r^2"},
      {"quadrature.angular_nodes", "64", "polar rule nodes in angle"},
      {"quadrature.node_budget", "4000000", "largest node count of one coefficient"},
      {"truncation.mode", "radius", "radius | tail_tol"},
      {"truncation.radius", "64", "lattice radius R in cells"},
      {"truncation.tail_tol", "1e-10", "dropped-coefficient bound in tail_tol mode"},
      {"truncation.cap", "4000000", "largest lattice index set"},
      {"modulus.order", "2", "order n of the modulus of smoothness"},
      {"modulus.radii", "16", "sampled step lengths"},
      {"modulus.directions", "8", "sampled directions (d = 2)"},
      {"verify.max_order", "6", "moment defects are reported for n = 1..max_order"},
      {"verify.expect_order", "0", "expected approximation order; 0 disables the check"},
      {"converge.expect_order", "nan", "expected fitted order; nan disables the check"},
      {"converge.tolerance", "0.25", "allowed deviation from expect_order"},
      {"reproduce.tolerance", "1e-6", "largest accepted max-abs reproduction error"},
      {"compare.w", "8,16,32,64", "dilation factors w"},
      {"compare.jitter", "1e-3", "sample and cell shift in units of 1/w"},
      {"output.csv", "", "CSV file name inside --out (subcommand default when empty)"},
      {"output.json", "", "JSON file name inside --out (subcommand default when empty)"},
  };
  return schema;
}

namespace {

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  return v;
}

}  // namespace

Config::Config() {
  for (const auto& k : config_schema()) values_[k.key] = k.default_value;
}

Config Config::from_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::ostringstream msg;
    msg << "config line " << e.line() << ": " << e.message();
    throw ConfigError(msg.str());
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must appear inside a [section]");
    for (const auto& [name, leaf] : body) {
      const std::string key = section + "." + name;
      if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
      c.set(key, trim(leaf.data()));
    }
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str());
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

bool Config::is_set(const std::string& key) const { return explicit_.count(key) > 0; }

std::string Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const { return parse_real(key, str(key)); }

int Config::integer(const std::string& key) const {
  const double v = real(key);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("key '" + key + "': '" + str(key) + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<double> Config::reals(const std::string& key) const {
  std::string text = str(key);
  for (char& ch : text)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_real(key, token));
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one number");
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
  explicit_[key] = value;
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_schema()) out.emplace_back(k.key, values_.at(k.key));
  return out;
}

}  // namespace kks::cli
