#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>

#include "mea/app/config.hpp"

namespace mea::app {

/// Process exit codes; every error path maps to exactly one of them.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // bad command line, contract violation or internal error
  kExitConfig = 2,      // config missing, malformed, unknown key or schema violation
  kExitDivergence = 3,  // non-finite state during integration
  kExitSolver = 4,      // singular inertia or non-invertible elliptic mode
  kExitCheck = 5,       // at least one invariant check failed
  kExitIo = 6,          // an output or data file could not be written or read
};

enum class Stream { out, err };
using Reporter = std::function<void(Stream, const std::string&)>;

/// Writes to stdout / stderr.
Reporter console_reporter();

struct CommandOptions {
  std::optional<std::uint64_t> seed;    // overrides [run] seed
  std::optional<std::string> out_dir;   // overrides [output] dir
  bool quiet = false;                   // suppress progress on the out stream
  bool flip_bracket = false;            // check: negative control
  Reporter report = console_reporter();
};

/// Integrates the configured system, writing the normalized config, a
/// diagnostics CSV and snapshots into the output directory.
int run_command(const RunConfig& cfg, const CommandOptions& opt);

/// Invariant suite; `cfg` may be null (defaults). Returns kExitCheck when
/// any check fails.
int check_command(const RunConfig* cfg, const CommandOptions& opt);

/// Error-versus-refinement table written to <out>/convergence.csv.
int convergence_command(const RunConfig& cfg, const CommandOptions& opt);

/// One isolated run per sweep value in <out>/run_NNN, concurrently, with a
/// summary in <out>/sweep.csv. Returns the exit code of the first failing
/// run (by index), or 0.
int sweep_command(const RunConfig& cfg, const CommandOptions& opt);

/// Maps an in-flight exception to its exit code and reports the message.
int exit_code_for(std::exception_ptr e, const Reporter& report);

}  // namespace mea::app
