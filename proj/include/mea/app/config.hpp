#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mea/core/integrators.hpp"

namespace mea::app {

/// Scalar or one-dimensional array read from a config file. Numbers keep
/// their token text until the schema gives them a type.
struct Value {
  enum class Type { string, number, boolean, array };

  Type type = Type::string;
  std::string text;  // string contents or number token
  bool flag = false;
  std::vector<Value> items;
  int line = 0;

  static Value string(std::string s);
  static Value number(double x);
  static Value integer(long long x);
  static Value boolean(bool b);
  static Value numbers(const std::vector<double>& xs);

  /// Rendering used by the normalized echo (parses back to the same value).
  std::string render() const;
};

struct Entry {
  std::string key;
  Value value;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Value* find(std::string_view key) const;
};

/// Sections and keys in file order. Grammar (one construct per line):
///   # comment
///   [section]
///   key = "string" | 1.5e-3 | true | [1, 2, 3]
struct Document {
  std::vector<Section> sections;

  const Section* find(std::string_view name) const;
  const Value* find(std::string_view section, std::string_view key) const;
};

/// Syntax layer only; throws ConfigError(syntax) with the offending line.
Document parse_document(std::string_view text, const std::string& origin);

/// A validated run description. `doc` is normalized: every key the chosen
/// system and initial preset use is present, in canonical order, with
/// canonical number formatting.
struct RunConfig {
  Document doc;
  std::string origin = "<string>";
  std::filesystem::path base_dir = ".";

  const std::string& system() const;
  /// The system without an "extended:" prefix.
  std::string base_system() const;
  bool extended() const;
  /// "circle", "qg" or "ic".
  std::string family() const;

  bool has(std::string_view section, std::string_view key) const;
  double number(std::string_view section, std::string_view key) const;
  long long integer(std::string_view section, std::string_view key) const;
  std::uint64_t uinteger(std::string_view section, std::string_view key) const;
  bool boolean(std::string_view section, std::string_view key) const;
  const std::string& string(std::string_view section, std::string_view key) const;
  std::vector<double> numbers(std::string_view section, std::string_view key) const;

  IntegratorConfig integrator() const;
  std::uint64_t seed() const;
  /// Relative paths are taken from the config file's directory.
  std::filesystem::path resolve(const std::string& path) const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(std::string_view text, const std::filesystem::path& base_dir = ".",
                              const std::string& origin = "<string>");

/// Canonical text of a validated config; parse(normalize(c)) == normalize(c).
std::string normalize(const RunConfig& cfg);

/// Copy with `section.key` set to `v`, re-validated from scratch.
RunConfig with_value(const RunConfig& cfg, const std::string& dotted_key, const Value& v);
RunConfig with_seed(const RunConfig& cfg, std::uint64_t seed);

/// Names accepted by [system] name.
const std::vector<std::string>& system_names();

}  // namespace mea::app
