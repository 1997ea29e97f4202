#include "mea/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "mea/circle/circle_system.hpp"
#include "mea/errors.hpp"
#include "mea/sphere/qg.hpp"

namespace mea::app {

namespace {

using Kind = ConfigError::Kind;

[[noreturn]] void fail(Kind kind, const std::string& origin, int line, const std::string& msg,
                       const std::string& key = {}) {
  std::string where = origin;
  if (line > 0) where += ":" + std::to_string(line);
  throw ConfigError(kind, where + ": " + msg, line, key);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) return std::nullopt;
  return x;
}

template <typename T>
std::optional<T> parse_int(const std::string& s) {
  T x{};
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto res = std::from_chars(begin, end, x);
  if (res.ec != std::errc() || res.ptr != end || begin == end) return std::nullopt;
  return x;
}

// ---------------------------------------------------------------- lexer

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  const std::string& origin;
  int line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  }
  bool at_end_or_comment() {
    skip_ws();
    return i >= s.size() || s[i] == '#';
  }
  [[noreturn]] void error(const std::string& msg) { fail(Kind::syntax, origin, line, msg); }

  static bool bare(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  }

  std::string bare_word(const char* what) {
    skip_ws();
    const std::size_t start = i;
    while (i < s.size() && bare(s[i])) ++i;
    if (i == start) error(std::string("expected ") + what);
    return std::string(s.substr(start, i - start));
  }

  Value scalar() {
    skip_ws();
    if (i >= s.size()) error("missing value");
    Value v;
    v.line = line;
    const char c = s[i];
    if (c == '"') {
      ++i;
      v.type = Value::Type::string;
      while (true) {
        if (i >= s.size()) error("unterminated string");
        const char d = s[i++];
        if (d == '"') break;
        if (d == '\\') {
          if (i >= s.size()) error("unterminated escape");
          const char e = s[i++];
          switch (e) {
            case '"': v.text += '"'; break;
            case '\\': v.text += '\\'; break;
            case 'n': v.text += '\n'; break;
            case 't': v.text += '\t'; break;
            default: error(std::string("unknown escape \\") + e);
          }
        } else {
          v.text += d;
        }
      }
      return v;
    }
    if (c == '[') error("nested arrays are not supported");
    const std::size_t start = i;
    while (i < s.size() && (bare(s[i]) || s[i] == '.' || s[i] == '+')) ++i;
    const std::string tok(s.substr(start, i - start));
    if (tok.empty()) error(std::string("unexpected character '") + c + "'");
    if (tok == "true" || tok == "false") {
      v.type = Value::Type::boolean;
      v.flag = tok == "true";
      return v;
    }
    if (!parse_double(tok)) error("malformed value '" + tok + "'");
    v.type = Value::Type::number;
    v.text = tok;
    return v;
  }

  Value value() {
    skip_ws();
    if (i < s.size() && s[i] == '[') {
      ++i;
      Value arr;
      arr.type = Value::Type::array;
      arr.line = line;
      skip_ws();
      if (i < s.size() && s[i] == ']') {
        ++i;
        return arr;
      }
      while (true) {
        arr.items.push_back(scalar());
        skip_ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          skip_ws();
          if (i < s.size() && s[i] == ']') {
            ++i;
            return arr;
          }
          continue;
        }
        if (i < s.size() && s[i] == ']') {
          ++i;
          return arr;
        }
        error("expected ',' or ']' in array");
      }
    }
    return scalar();
  }
};

// ---------------------------------------------------------------- schema

enum class Type { string, number, integer, uinteger, boolean, numbers, vec3, values };

struct KeySpec {
  std::string section;
  std::string key;
  Type type;
  std::optional<Value> def;  // nullopt: required unless `optional`
  bool optional = false;
};

const std::vector<std::string> kSections = {"system", "discretization", "integrator", "initial",
                                            "output", "run",           "check",      "convergence",
                                            "sweep"};
const std::set<std::string> kOptionalSections = {"check", "convergence", "sweep"};

const std::vector<std::string> kCircle = {"burgers", "kdv", "ch", "gch"};
const std::map<std::string, std::vector<std::string>> kPresets = {
    {"circle", {"constant", "cosine", "random", "file"}},
    {"qg", {"rest", "zonal", "rossby-haurwitz", "random", "file"}},
    {"ic", {"rest", "shear", "taylor-green", "random", "file"}},
};
const std::vector<std::string> kTopographies = {"zero", "zonal:P2", "gaussian-bump", "file"};
const std::vector<std::string> kCases = {"self", "kdv-linear", "ic-shear", "qg-rossby-haurwitz"};

std::string family_of(const std::string& base) {
  if (std::find(kCircle.begin(), kCircle.end(), base) != kCircle.end()) return "circle";
  return base;
}

std::string strip_extended(const std::string& name) {
  const std::string prefix = "extended:";
  return name.rfind(prefix, 0) == 0 ? name.substr(prefix.size()) : name;
}

struct Context {
  std::string system;
  std::string base;
  std::string family;
  bool extended = false;
  std::string preset;
  std::string topography = "zero";
  std::string convergence_case = "self";
  std::set<std::string> optional_sections;
};

Value S(const char* s) { return Value::string(s); }
Value N(double x) { return Value::number(x); }
Value I(long long x) { return Value::integer(x); }
Value B(bool b) { return Value::boolean(b); }

std::vector<KeySpec> build_schema(const Context& c) {
  std::vector<KeySpec> k;
  auto add = [&](const char* sec, const char* key, Type t, std::optional<Value> def, bool opt = false) {
    k.push_back({sec, key, t, std::move(def), opt});
  };

  add("system", "name", Type::string, std::nullopt);
  if (c.family == "circle") {
    const auto p = circle::CircleSystemConfig::preset(c.base, 1.0, 8);
    const bool magnetic = c.base == "kdv" || c.base == "gch" || c.extended;
    add("system", "a", Type::number, N(magnetic ? 1.0 : 0.0));
    add("system", "alpha", Type::number, N(p.alpha));
    add("system", "beta", Type::number, N(p.beta));
    add("system", "period", Type::number, N(2.0 * std::numbers::pi));
    add("system", "linear_only", Type::boolean, B(false));
    add("discretization", "K", Type::integer, I(64));
  } else if (c.family == "qg") {
    add("system", "a", Type::number, N(1.0));
    add("system", "gamma", Type::number, N(0.0));
    add("system", "Ro", Type::number, N(1.0));
    add("system", "radius_convention", Type::number, N(1.0));
    add("system", "phi_topography_over_Ro", Type::boolean, B(false));
    add("system", "topography", Type::string, S("zero"));
    if (c.topography == "zonal:P2" || c.topography == "gaussian-bump")
      add("system", "topography_amplitude", Type::number, N(0.1));
    if (c.topography == "gaussian-bump") {
      add("system", "bump_z", Type::number, N(0.5));
      add("system", "bump_lon", Type::number, N(0.0));
      add("system", "bump_width", Type::number, N(0.3));
    }
    if (c.topography == "file") add("system", "topography_file", Type::string, std::nullopt);
    add("discretization", "lmax", Type::integer, I(42));
  } else {
    add("system", "a", Type::number, N(1.0));
    add("system", "B", Type::vec3, Value::numbers({0.0, 0.0, 1.0}));
    add("system", "B_file", Type::string, std::nullopt, true);
    add("discretization", "K", Type::integer, I(16));
  }
  add("discretization", "dealias", Type::boolean, B(true));

  const bool stiff = c.family == "circle" && !c.extended;
  add("integrator", "scheme", Type::string, S(stiff ? "if_rk4" : "rk4"));
  add("integrator", "dt", Type::number, N(1e-3));
  add("integrator", "t_end", Type::number, N(1.0));
  add("integrator", "monitor_stride", Type::integer, I(1));

  add("initial", "preset", Type::string, S(c.family == "circle" ? "cosine" : "random"));
  const std::string& p = c.preset;
  if (p == "file") {
    add("initial", "file", Type::string, std::nullopt);
  } else if (c.family == "circle") {
    if (p == "constant") add("initial", "value", Type::number, N(1.0));
    if (p == "cosine") {
      add("initial", "amplitude", Type::number, N(1.0));
      add("initial", "mode", Type::integer, I(1));
      add("initial", "value", Type::number, N(0.0));
    }
    if (p == "random") {
      add("initial", "amplitude", Type::number, N(1.0));
      add("initial", "band", Type::integer, I(8));
      add("initial", "value", Type::number, N(0.0));
    }
  } else if (c.family == "qg") {
    if (p != "rest") add("initial", "amplitude", Type::number, N(1.0));
    if (p == "zonal") add("initial", "band", Type::integer, I(6));
    if (p == "random") add("initial", "band", Type::integer, I(8));
    if (p == "rossby-haurwitz") {
      add("initial", "degree", Type::integer, I(4));
      add("initial", "order", Type::integer, I(2));
    }
    add("initial", "mean", Type::number, N(0.0));
  } else {
    if (p != "rest") add("initial", "amplitude", Type::number, N(1.0));
    if (p == "shear") add("initial", "mode", Type::integer, I(1));
    if (p == "random") add("initial", "band", Type::integer, I(4));
  }

  add("output", "dir", Type::string, S("out"));
  add("output", "csv", Type::string, S("diagnostics.csv"));
  add("output", "snapshot_times", Type::numbers, Value::numbers({}));
  add("output", "final_snapshot", Type::boolean, B(true));
  add("run", "seed", Type::uinteger, I(0));

  if (c.optional_sections.count("check")) {
    add("check", "samples", Type::integer, I(20));
    add("check", "strength", Type::number, N(1.0));
    add("check", "flip_bracket", Type::boolean, B(false));
  }
  if (c.optional_sections.count("convergence")) {
    add("convergence", "case", Type::string, S("self"));
    const std::string& cc = c.convergence_case;
    std::vector<double> levels = {4e-3, 2e-3, 1e-3, 5e-4};
    if (cc == "kdv-linear") levels = {2e-3, 1e-3, 5e-4, 2.5e-4};
    if (cc == "ic-shear") levels = {0.2, 0.1, 0.05, 0.025};
    if (cc == "qg-rossby-haurwitz") levels = {15, 21, 31};
    add("convergence", "levels", Type::numbers, Value::numbers(levels));
  }
  if (c.optional_sections.count("sweep")) {
    add("sweep", "parameter", Type::string, std::nullopt);
    add("sweep", "values", Type::values, std::nullopt);
    add("sweep", "threads", Type::integer, I(0));
  }
  return k;
}

// Every key any configuration of this family may use, per section.
std::set<std::string> known_keys(const Context& base) {
  std::set<std::string> out;
  Context c = base;
  c.optional_sections = kOptionalSections;
  for (const auto& preset : kPresets.at(c.family)) {
    for (const auto& topo : kTopographies) {
      c.preset = preset;
      c.topography = topo;
      for (const auto& spec : build_schema(c)) out.insert(spec.section + "." + spec.key);
    }
  }
  return out;
}

const char* type_name(Type t) {
  switch (t) {
    case Type::string: return "a string";
    case Type::number: return "a number";
    case Type::integer: return "an integer";
    case Type::uinteger: return "a non-negative integer";
    case Type::boolean: return "true or false";
    case Type::numbers: return "an array of numbers";
    case Type::vec3: return "an array of three numbers";
    case Type::values: return "a non-empty array of numbers or strings";
  }
  return "a value";
}

std::optional<Value> canonical_number(const Value& v) {
  if (v.type != Value::Type::number) return std::nullopt;
  auto x = parse_double(v.text);
  if (!x) return std::nullopt;
  Value out = Value::number(*x);
  out.line = v.line;
  return out;
}

// Checks the type and rewrites numbers canonically.
std::optional<Value> typed(const Value& v, Type t) {
  switch (t) {
    case Type::string:
    case Type::boolean:
      if (v.type != (t == Type::string ? Value::Type::string : Value::Type::boolean)) return std::nullopt;
      return v;
    case Type::number: return canonical_number(v);
    case Type::integer: {
      if (v.type != Value::Type::number) return std::nullopt;
      auto x = parse_int<long long>(v.text);
      if (!x) return std::nullopt;
      Value out = Value::integer(*x);
      out.line = v.line;
      return out;
    }
    case Type::uinteger: {
      if (v.type != Value::Type::number) return std::nullopt;
      auto x = parse_int<std::uint64_t>(v.text);
      if (!x) return std::nullopt;
      Value out = v;
      out.text = std::to_string(*x);
      return out;
    }
    case Type::numbers:
    case Type::vec3:
    case Type::values: {
      if (v.type != Value::Type::array) return std::nullopt;
      if (t == Type::vec3 && v.items.size() != 3) return std::nullopt;
      if (t == Type::values && v.items.empty()) return std::nullopt;
      Value out = v;
      for (auto& item : out.items) {
        if (t == Type::values && item.type == Value::Type::string) continue;
        auto n = canonical_number(item);
        if (!n) return std::nullopt;
        item = *n;
      }
      return out;
    }
  }
  return std::nullopt;
}

std::string raw_string(const Document& doc, const char* sec, const char* key, const std::string& fallback,
                       const std::string& origin) {
  const Value* v = doc.find(sec, key);
  if (!v) return fallback;
  if (v->type != Value::Type::string)
    fail(Kind::schema, origin, v->line, std::string(sec) + "." + key + " must be a string", key);
  return v->text;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

std::string render_document(const Document& doc) {
  std::string out = "# normalized mea configuration\n";
  for (const auto& sec : doc.sections) {
    out += "\n[" + sec.name + "]\n";
    for (const auto& e : sec.entries) out += e.key + " = " + e.value.render() + "\n";
  }
  return out;
}

// ------------------------------------------------------- semantic checks

struct Validator {
  const RunConfig& cfg;

  int line(const char* sec, const char* key) const {
    const Value* v = cfg.doc.find(sec, key);
    return v ? v->line : 0;
  }
  [[noreturn]] void schema(const char* sec, const char* key, const std::string& msg) const {
    fail(Kind::schema, cfg.origin, line(sec, key), msg, key);
  }
  void require_file(const char* sec, const char* key) const {
    if (!cfg.has(sec, key)) return;
    const auto p = cfg.resolve(cfg.string(sec, key));
    if (!std::filesystem::is_regular_file(p))
      fail(Kind::missing_file, cfg.origin, line(sec, key),
           std::string(sec) + "." + key + " refers to a missing file: " + p.string(), key);
  }
  void positive_int(const char* sec, const char* key, long long lo, long long hi) const {
    if (!cfg.has(sec, key)) return;
    const long long x = cfg.integer(sec, key);
    if (x < lo || x > hi)
      schema(sec, key,
             std::string(sec) + "." + key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                 "], got " + std::to_string(x));
  }

  void run() const {
    const std::string fam = cfg.family();
    const std::string base = cfg.base_system();

    try {
      cfg.integrator().validate();
    } catch (const Error& e) {
      schema("integrator", "dt", std::string("invalid integrator settings: ") + e.what());
    }
    const auto scheme = cfg.string("integrator", "scheme");
    if (scheme != "rk4" && scheme != "if_rk4")
      schema("integrator", "scheme", "integrator.scheme must be \"rk4\" or \"if_rk4\", got \"" + scheme + "\"");
    if (scheme == "if_rk4" && (fam != "circle" || cfg.extended()))
      schema("integrator", "scheme",
             "if_rk4 needs a diagonal linear part; system " + cfg.system() + " supports rk4 only");

    const double a = cfg.number("system", "a");
    if (fam == "circle") {
      if (!cfg.extended() && (base == "burgers" || base == "ch") && a != 0.0)
        schema("system", "a",
               base + " is the unmagnetized preset and needs a = 0 (use " + (base == "burgers" ? "kdv" : "gch") +
                   " for a != 0)");
      positive_int("discretization", "K", 1, 1 << 20);
      circle::CircleSystemConfig c;
      c.alpha = cfg.number("system", "alpha");
      c.beta = cfg.number("system", "beta");
      c.a = a;
      c.K = static_cast<int>(cfg.integer("discretization", "K"));
      c.L = cfg.number("system", "period");
      try {
        c.validate();
      } catch (const Error& e) {
        schema("system", "alpha", std::string("invalid circle parameters: ") + e.what());
      }
    } else if (fam == "qg") {
      positive_int("discretization", "lmax", 1, 1024);
      sphere::QGConfig q;
      q.gamma = cfg.number("system", "gamma");
      q.Ro = cfg.number("system", "Ro");
      q.a = a;
      q.lmax = static_cast<int>(cfg.integer("discretization", "lmax"));
      q.radius_convention = cfg.number("system", "radius_convention");
      try {
        q.validate();
      } catch (const Error& e) {
        schema("system", "gamma", std::string("invalid qg parameters: ") + e.what());
      }
      const auto topo = cfg.string("system", "topography");
      if (std::find(kTopographies.begin(), kTopographies.end(), topo) == kTopographies.end())
        schema("system", "topography", "system.topography must be one of " + join(kTopographies));
      if (topo == "gaussian-bump") {
        const double zc = cfg.number("system", "bump_z");
        if (zc < -1.0 || zc > 1.0) schema("system", "bump_z", "system.bump_z must lie in [-1, 1]");
        if (cfg.number("system", "bump_width") <= 0.0)
          schema("system", "bump_width", "system.bump_width must be positive");
      }
      require_file("system", "topography_file");
    } else {
      positive_int("discretization", "K", 1, 256);
      if (cfg.has("system", "B_file") && line("system", "B") > 0)
        schema("system", "B", "give either system.B or system.B_file, not both");
      require_file("system", "B_file");
    }

    // Initial condition.
    const auto& preset = cfg.string("initial", "preset");
    const auto& presets = kPresets.at(fam);
    if (std::find(presets.begin(), presets.end(), preset) == presets.end())
      schema("initial", "preset", "initial.preset for " + base + " must be one of " + join(presets));
    require_file("initial", "file");
    const long long res =
        fam == "qg" ? cfg.integer("discretization", "lmax") : cfg.integer("discretization", "K");
    positive_int("initial", "mode", 1, res);
    positive_int("initial", "band", 1, res);
    positive_int("initial", "degree", 1, res);
    if (cfg.has("initial", "order")) {
      const long long m = cfg.integer("initial", "order");
      if (m < 0 || m > cfg.integer("initial", "degree"))
        schema("initial", "order", "initial.order must lie in [0, initial.degree]");
    }
    if (fam == "qg" && cfg.number("system", "gamma") == 0.0 && cfg.has("initial", "mean") &&
        cfg.number("initial", "mean") != 0.0)
      schema("initial", "mean",
             "qg with gamma = 0 requires mean-free initial vorticity: (gamma z^2 - Delta) psi has zero "
             "mean, so initial.mean must be 0");

    // Output.
    const auto times = cfg.numbers("output", "snapshot_times");
    const double t_end = cfg.number("integrator", "t_end");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] < 0.0 || times[i] > t_end)
        schema("output", "snapshot_times", "output.snapshot_times must lie in [0, t_end]");
      if (i > 0 && times[i] <= times[i - 1])
        schema("output", "snapshot_times", "output.snapshot_times must be strictly increasing");
    }

    if (cfg.has("check", "samples")) positive_int("check", "samples", 1, 100000);
    if (cfg.has("convergence", "case")) {
      const auto& cc = cfg.string("convergence", "case");
      if (std::find(kCases.begin(), kCases.end(), cc) == kCases.end())
        schema("convergence", "case", "convergence.case must be one of " + join(kCases));
      const std::map<std::string, std::string> needs = {
          {"kdv-linear", "kdv"}, {"ic-shear", "ic"}, {"qg-rossby-haurwitz", "qg"}};
      if (auto it = needs.find(cc); it != needs.end() && cfg.system() != it->second)
        schema("convergence", "case", "convergence.case " + cc + " needs system " + it->second);
      const auto levels = cfg.numbers("convergence", "levels");
      if (levels.size() < 3) schema("convergence", "levels", "convergence.levels needs at least 3 levels");
      for (double x : levels) {
        if (!(x > 0.0)) schema("convergence", "levels", "convergence.levels must be positive");
        if (cc == "qg-rossby-haurwitz" && (x != std::floor(x) || x < 2))
          schema("convergence", "levels", "qg-rossby-haurwitz levels are integer lmax values >= 2");
      }
    }
    if (cfg.has("sweep", "parameter")) {
      const auto& p = cfg.string("sweep", "parameter");
      const auto dot = p.find('.');
      if (dot == std::string::npos || !cfg.has(p.substr(0, dot), p.substr(dot + 1)))
        schema("sweep", "parameter", "sweep.parameter '" + p + "' is not a key of this configuration");
      if (p == "system.name") schema("sweep", "parameter", "sweep.parameter cannot change the system");
      if (cfg.integer("sweep", "threads") < 0) schema("sweep", "threads", "sweep.threads must be >= 0");
    }
  }
};

}  // namespace

// ---------------------------------------------------------------- Value

Value Value::string(std::string s) {
  Value v;
  v.type = Type::string;
  v.text = std::move(s);
  return v;
}

Value Value::number(double x) {
  Value v;
  v.type = Type::number;
  v.text = format_double(x);
  return v;
}

Value Value::integer(long long x) {
  Value v;
  v.type = Type::number;
  v.text = std::to_string(x);
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.type = Type::boolean;
  v.flag = b;
  return v;
}

Value Value::numbers(const std::vector<double>& xs) {
  Value v;
  v.type = Type::array;
  for (double x : xs) v.items.push_back(number(x));
  return v;
}

std::string Value::render() const {
  switch (type) {
    case Type::boolean: return flag ? "true" : "false";
    case Type::number: return text;
    case Type::string: {
      std::string out = "\"";
      for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        if (c == '\t') {
          out += "\\t";
          continue;
        }
        out += c;
      }
      return out + "\"";
    }
    case Type::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i].render();
      return out + "]";
    }
  }
  return {};
}

const Value* Section::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

const Section* Document::find(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const Value* Document::find(std::string_view section, std::string_view key) const {
  const Section* s = find(section);
  return s ? s->find(key) : nullptr;
}

Document parse_document(std::string_view text, const std::string& origin) {
  Document doc;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    Cursor cur{text.substr(pos, nl - pos), 0, origin, ++lineno};
    pos = nl + 1;

    if (cur.at_end_or_comment()) continue;
    if (cur.s[cur.i] == '[') {
      ++cur.i;
      Section sec;
      sec.name = cur.bare_word("a section name");
      sec.line = lineno;
      cur.skip_ws();
      if (cur.i >= cur.s.size() || cur.s[cur.i] != ']') cur.error("expected ']' after section name");
      ++cur.i;
      if (!cur.at_end_or_comment()) cur.error("unexpected text after section header");
      if (doc.find(sec.name)) cur.error("duplicate section [" + sec.name + "]");
      doc.sections.push_back(std::move(sec));
      continue;
    }
    const std::string key = cur.bare_word("a key or [section]");
    cur.skip_ws();
    if (cur.i >= cur.s.size() || cur.s[cur.i] != '=') cur.error("expected '=' after key '" + key + "'");
    ++cur.i;
    Value v = cur.value();
    if (!cur.at_end_or_comment()) cur.error("unexpected text after value of '" + key + "'");
    if (doc.sections.empty()) cur.error("key '" + key + "' appears before any [section]");
    Section& sec = doc.sections.back();
    if (sec.find(key)) cur.error("duplicate key '" + key + "' in [" + sec.name + "]");
    sec.entries.push_back({key, std::move(v)});
  }
  return doc;
}

// ---------------------------------------------------------------- RunConfig

const std::string& RunConfig::system() const { return string("system", "name"); }
std::string RunConfig::base_system() const { return strip_extended(system()); }
bool RunConfig::extended() const { return system() != base_system(); }
std::string RunConfig::family() const { return family_of(base_system()); }

bool RunConfig::has(std::string_view section, std::string_view key) const {
  return doc.find(section, key) != nullptr;
}

namespace {
const Value& lookup(const RunConfig& c, std::string_view section, std::string_view key) {
  const Value* v = c.doc.find(section, key);
  if (!v) throw ContractViolation("config has no key " + std::string(section) + "." + std::string(key));
  return *v;
}
}  // namespace

double RunConfig::number(std::string_view section, std::string_view key) const {
  auto x = parse_double(lookup(*this, section, key).text);
  if (!x) throw ContractViolation("config key " + std::string(key) + " is not a number");
  return *x;
}

long long RunConfig::integer(std::string_view section, std::string_view key) const {
  auto x = parse_int<long long>(lookup(*this, section, key).text);
  if (!x) throw ContractViolation("config key " + std::string(key) + " is not an integer");
  return *x;
}

std::uint64_t RunConfig::uinteger(std::string_view section, std::string_view key) const {
  auto x = parse_int<std::uint64_t>(lookup(*this, section, key).text);
  if (!x) throw ContractViolation("config key " + std::string(key) + " is not an unsigned integer");
  return *x;
}

bool RunConfig::boolean(std::string_view section, std::string_view key) const {
  return lookup(*this, section, key).flag;
}

const std::string& RunConfig::string(std::string_view section, std::string_view key) const {
  return lookup(*this, section, key).text;
}

std::vector<double> RunConfig::numbers(std::string_view section, std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : lookup(*this, section, key).items) out.push_back(*parse_double(item.text));
  return out;
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig ic;
  ic.dt = number("integrator", "dt");
  ic.t_end = number("integrator", "t_end");
  ic.scheme = string("integrator", "scheme") == "if_rk4" ? Scheme::if_rk4 : Scheme::rk4;
  ic.monitor_stride = static_cast<int>(integer("integrator", "monitor_stride"));
  return ic;
}

std::uint64_t RunConfig::seed() const { return uinteger("run", "seed"); }

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

const std::vector<std::string>& system_names() {
  static const std::vector<std::string> names = {"burgers", "kdv", "ch", "gch", "qg", "ic", "extended:<base>"};
  return names;
}

RunConfig parse_config_string(std::string_view text, const std::filesystem::path& base_dir,
                              const std::string& origin) {
  const Document raw = parse_document(text, origin);

  for (const auto& sec : raw.sections)
    if (std::find(kSections.begin(), kSections.end(), sec.name) == kSections.end())
      fail(Kind::unknown_key, origin, sec.line, "unknown section [" + sec.name + "]", sec.name);

  const Value* name = raw.find("system", "name");
  if (!name) fail(Kind::schema, origin, 0, "missing required key system.name", "name");
  if (name->type != Value::Type::string) fail(Kind::schema, origin, name->line, "system.name must be a string", "name");

  Context ctx;
  ctx.system = name->text;
  ctx.base = strip_extended(ctx.system);
  ctx.extended = ctx.base != ctx.system;
  ctx.family = family_of(ctx.base);
  if (!kPresets.count(ctx.family))
    fail(Kind::schema, origin, name->line,
         "unknown system '" + ctx.system + "'; expected one of " + join(system_names()), "name");
  ctx.preset = raw_string(raw, "initial", "preset", ctx.family == "circle" ? "cosine" : "random", origin);
  ctx.topography = raw_string(raw, "system", "topography", "zero", origin);
  ctx.convergence_case = raw_string(raw, "convergence", "case", "self", origin);
  for (const auto& sec : raw.sections)
    if (kOptionalSections.count(sec.name)) ctx.optional_sections.insert(sec.name);

  const auto known = known_keys(ctx);
  const auto schema = build_schema(ctx);
  std::set<std::string> relevant;
  for (const auto& s : schema) relevant.insert(s.section + "." + s.key);

  for (const auto& sec : raw.sections)
    for (const auto& e : sec.entries) {
      const std::string full = sec.name + "." + e.key;
      if (!known.count(full))
        fail(Kind::unknown_key, origin, e.value.line,
             "unknown key '" + e.key + "' in [" + sec.name + "] for system " + ctx.system, e.key);
      if (!relevant.count(full))
        fail(Kind::schema, origin, e.value.line,
             "key " + full + " does not apply here (initial.preset = \"" + ctx.preset + "\", system.topography = \"" +
                 ctx.topography + "\")",
             e.key);
    }

  RunConfig cfg;
  cfg.origin = origin;
  cfg.base_dir = base_dir.empty() ? std::filesystem::path(".") : base_dir;
  for (const auto& spec : schema) {
    const Value* given = raw.find(spec.section, spec.key);
    std::optional<Value> v;
    if (given) {
      v = typed(*given, spec.type);
      if (!v)
        fail(Kind::schema, origin, given->line,
             spec.section + "." + spec.key + " must be " + type_name(spec.type), spec.key);
    } else if (spec.def) {
      v = spec.def;
    } else if (spec.optional) {
      continue;
    } else {
      fail(Kind::schema, origin, 0, "missing required key " + spec.section + "." + spec.key, spec.key);
    }
    Section* sec = nullptr;
    for (auto& s : cfg.doc.sections)
      if (s.name == spec.section) sec = &s;
    if (!sec) {
      cfg.doc.sections.push_back({spec.section, 0, {}});
      sec = &cfg.doc.sections.back();
    }
    sec->entries.push_back({spec.key, *v});
  }
  // B is only echoed when no B field file replaces it.
  if (cfg.has("system", "B_file")) {
    auto& entries = cfg.doc.sections.front().entries;
    const Value* b = raw.find("system", "B");
    if (!b)
      entries.erase(std::remove_if(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "B"; }),
                    entries.end());
  }

  Validator{cfg}.run();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path))
    throw ConfigError(Kind::missing_file, "config file not found: " + path.string(), 0, {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(Kind::missing_file, "cannot open config file: " + path.string(), 0, {});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path.parent_path(), path.string());
}

std::string normalize(const RunConfig& cfg) { return render_document(cfg.doc); }

RunConfig with_value(const RunConfig& cfg, const std::string& dotted_key, const Value& v) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ContractViolation("expected section.key, got " + dotted_key);
  Document doc = cfg.doc;
  const std::string sec_name = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  Section* sec = nullptr;
  for (auto& s : doc.sections)
    if (s.name == sec_name) sec = &s;
  if (!sec) {
    doc.sections.push_back({sec_name, 0, {}});
    sec = &doc.sections.back();
  }
  bool replaced = false;
  for (auto& e : sec->entries)
    if (e.key == key) {
      e.value = v;
      replaced = true;
    }
  if (!replaced) sec->entries.push_back({key, v});
  return parse_config_string(render_document(doc), cfg.base_dir, cfg.origin);
}

RunConfig with_seed(const RunConfig& cfg, std::uint64_t seed) {
  Value v;
  v.type = Value::Type::number;
  v.text = std::to_string(seed);
  return with_value(cfg, "run.seed", v);
}

}  // namespace mea::app
