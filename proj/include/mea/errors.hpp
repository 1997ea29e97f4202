#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mea {

// Base of every error the toolkit raises. Each subclass maps onto one
// C-API status / CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on shapes or inputs was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared while integrating. Carries the last finite
// state so callers can inspect where the trajectory broke down.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& stage, double last_time,
                  std::vector<double> last_state)
      : Error("non-finite state in stage " + stage + " (last finite t=" +
              std::to_string(last_time) + ")"),
        stage_(stage),
        last_time_(last_time),
        last_state_(std::move(last_state)) {}

  const std::string& stage() const noexcept { return stage_; }
  double last_time() const noexcept { return last_time_; }
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  std::string stage_;
  double last_time_;
  std::vector<double> last_state_;
};

// Base for failures of a linear solve (singular inertia, non-invertible
// elliptic mode, ill-conditioned oracle system).
class SolverError : public Error {
 public:
  using Error::Error;
};

class SingularInertia : public SolverError {
 public:
  explicit SingularInertia(long mode)
      : SolverError("singular inertia operator at wavenumber k=" +
                    std::to_string(mode)),
        mode_(mode) {}
  long mode() const noexcept { return mode_; }

 private:
  long mode_;
};

class NonInvertibleMode : public SolverError {
 public:
  using SolverError::SolverError;
};

class UnsupportedScheme : public Error {
 public:
  using Error::Error;
};

// Rejected configuration. `kind` is stable and machine readable.
class ConfigError : public Error {
 public:
  enum class Kind { missing_file, syntax, unknown_key, schema };

  ConfigError(Kind kind, const std::string& message, int line = 0, std::string key = {})
      : Error(message), kind_(kind), line_(line), key_(std::move(key)) {}

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a line
  const std::string& key() const noexcept { return key_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::missing_file: return "missing-file";
      case Kind::syntax: return "syntax";
      case Kind::unknown_key: return "unknown-key";
      case Kind::schema: return "schema";
    }
    return "config";
  }

 private:
  Kind kind_;
  int line_;
  std::string key_;
};

// Reading or writing an output/input file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mea
