#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kks::cli {

/// Raised for malformed files, unknown keys and invalid values; the message
/// names the line or the section.key involved.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string key;  // section.name
  std::string default_value;
  std::string help;
};

/// Every accepted key with its default, in documentation order.
const std::vector<KeySpec>& config_schema();

/// Flat `key = value` file with `[section]` headers. Values not given in the
/// file take their schema defaults.
class Config {
 public:
  Config();
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  /// True when the key was given explicitly (not defaulted).
  bool is_set(const std::string& key) const;
  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  /// Overrides a value after loading (used by tests and the --out flag).
  void set(const std::string& key, const std::string& value);

  /// Resolved (key, value) pairs in schema order.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> explicit_;
};

}  // namespace kks::cli
