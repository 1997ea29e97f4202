#include "mea/mea.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "mea/app/commands.hpp"
#include "mea/app/config.hpp"
#include "mea/app/factory.hpp"
#include "mea/app/snapshot.hpp"
#include "mea/core/integrators.hpp"
#include "mea/errors.hpp"

struct mea_config {
  mea::app::RunConfig cfg;
};

struct mea_system {
  mea::app::RunConfig cfg;
  mea::SystemPtr sys;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

const char* kind_for(int status) {
  switch (status) {
    case MEA_ERR_DIVERGENCE: return "divergence";
    case MEA_ERR_SOLVER: return "solver";
    case MEA_ERR_CHECK: return "check";
    case MEA_ERR_IO: return "io";
    default: return "usage";
  }
}

// Records the failure for mea_last_error and returns its status.
int fail(int status, const std::string& message, const char* kind = nullptr) {
  g_error = message;
  g_kind = kind ? kind : kind_for(status);
  return status;
}

int from_exception() {
  std::string kind;
  try {
    throw;
  } catch (const mea::ConfigError& e) {
    kind = mea::ConfigError::kind_name(e.kind());
  } catch (...) {
  }
  std::string message;
  const int code = mea::app::exit_code_for(std::current_exception(),
                                           [&](mea::app::Stream, const std::string& line) { message = line; });
  return fail(code, message, kind.empty() ? nullptr : kind.c_str());
}

template <typename F>
int guarded(F&& f) {
  g_error.clear();
  g_kind.clear();
  try {
    return f();
  } catch (...) {
    return from_exception();
  }
}

mea::app::CommandOptions command_options(const mea_options* opt) {
  mea::app::CommandOptions o;
  if (!opt) return o;
  if (opt->has_seed) o.seed = opt->seed;
  if (opt->out_dir) o.out_dir = std::string(opt->out_dir);
  o.quiet = opt->quiet != 0;
  o.flip_bracket = opt->flip_bracket != 0;
  if (opt->on_line) {
    const mea_line_fn fn = opt->on_line;
    void* user = opt->user;
    o.report = [fn, user](mea::app::Stream s, const std::string& line) {
      fn(s == mea::app::Stream::out ? 0 : 1, line.c_str(), user);
    };
  }
  return o;
}

// Wraps a command so its last diagnostic line becomes mea_last_error.
template <typename F>
int command(const mea_options* opt, F&& f) {
  return guarded([&]() -> int {
    mea::app::CommandOptions o = command_options(opt);
    std::string last;
    const auto forward = o.report;
    o.report = [&last, forward](mea::app::Stream s, const std::string& line) {
      if (s == mea::app::Stream::err) last = line;
      forward(s, line);
    };
    const int code = f(o);
    if (code != MEA_OK) fail(code, last.empty() ? std::string(mea_status_name(code)) : last);
    return code;
  });
}

}  // namespace

extern "C" {

const char* mea_version(void) { return "1.0.0"; }
const char* mea_last_error(void) { return g_error.c_str(); }
const char* mea_last_error_kind(void) { return g_kind.c_str(); }

const char* mea_status_name(int status) {
  switch (status) {
    case MEA_OK: return "ok";
    case MEA_ERR_USAGE: return "usage or internal error";
    case MEA_ERR_CONFIG: return "config error";
    case MEA_ERR_DIVERGENCE: return "divergence";
    case MEA_ERR_SOLVER: return "solver failure";
    case MEA_ERR_CHECK: return "check failure";
    case MEA_ERR_IO: return "i/o error";
    default: return "unknown status";
  }
}

void mea_options_init(mea_options* opt) {
  if (opt) std::memset(opt, 0, sizeof *opt);
}

int mea_config_load(const char* path, mea_config** out) {
  return guarded([&]() -> int {
    if (!path || !out) return fail(MEA_ERR_USAGE, "mea_config_load: null argument");
    *out = new mea_config{mea::app::parse_config(path)};
    return MEA_OK;
  });
}

int mea_config_parse(const char* text, const char* base_dir, mea_config** out) {
  return guarded([&]() -> int {
    if (!text || !out) return fail(MEA_ERR_USAGE, "mea_config_parse: null argument");
    *out = new mea_config{mea::app::parse_config_string(text, base_dir ? base_dir : ".")};
    return MEA_OK;
  });
}

int mea_config_normalized(const mea_config* cfg, char* buf, size_t cap, size_t* len) {
  return guarded([&]() -> int {
    if (!cfg) return fail(MEA_ERR_USAGE, "mea_config_normalized: null config");
    const std::string text = mea::app::normalize(cfg->cfg);
    if (len) *len = text.size();
    if (buf && cap > 0) {
      const std::size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
    return MEA_OK;
  });
}

void mea_config_free(mea_config* cfg) { delete cfg; }

int mea_run(const mea_config* cfg, const mea_options* opt) {
  if (!cfg) return fail(MEA_ERR_USAGE, "mea_run: null config");
  return command(opt, [&](const mea::app::CommandOptions& o) { return mea::app::run_command(cfg->cfg, o); });
}

int mea_check(const mea_config* cfg, const mea_options* opt) {
  return command(opt, [&](const mea::app::CommandOptions& o) {
    return mea::app::check_command(cfg ? &cfg->cfg : nullptr, o);
  });
}

int mea_convergence(const mea_config* cfg, const mea_options* opt) {
  if (!cfg) return fail(MEA_ERR_USAGE, "mea_convergence: null config");
  return command(opt, [&](const mea::app::CommandOptions& o) { return mea::app::convergence_command(cfg->cfg, o); });
}

int mea_sweep(const mea_config* cfg, const mea_options* opt) {
  if (!cfg) return fail(MEA_ERR_USAGE, "mea_sweep: null config");
  return command(opt, [&](const mea::app::CommandOptions& o) { return mea::app::sweep_command(cfg->cfg, o); });
}

int mea_system_create(const mea_config* cfg, mea_system** out) {
  return guarded([&]() -> int {
    if (!cfg || !out) return fail(MEA_ERR_USAGE, "mea_system_create: null argument");
    *out = new mea_system{cfg->cfg, mea::app::build_system(cfg->cfg)};
    return MEA_OK;
  });
}

void mea_system_free(mea_system* sys) { delete sys; }

size_t mea_system_dim(const mea_system* sys) { return sys ? sys->sys->dim() : 0; }

namespace {
int check_state(const mea_system* sys, const void* p, size_t n, const char* fn) {
  if (!sys || !p) return fail(MEA_ERR_USAGE, std::string(fn) + ": null argument");
  if (n != sys->sys->dim())
    return fail(MEA_ERR_USAGE, std::string(fn) + ": state has " + std::to_string(n) + " values, system dimension is " +
                                   std::to_string(sys->sys->dim()));
  return MEA_OK;
}
}  // namespace

int mea_system_initial_state(const mea_system* sys, double* out, size_t n) {
  return guarded([&]() -> int {
    if (int s = check_state(sys, out, n, "mea_system_initial_state")) return s;
    const mea::Vec u = mea::app::initial_state(sys->cfg, *sys->sys);
    std::copy(u.begin(), u.end(), out);
    return MEA_OK;
  });
}

int mea_system_rhs(const mea_system* sys, const double* u, double* out, size_t n) {
  return guarded([&]() -> int {
    if (int s = check_state(sys, u, n, "mea_system_rhs")) return s;
    if (!out) return fail(MEA_ERR_USAGE, "mea_system_rhs: null output");
    const mea::Vec r = mea::rhs_eulerian(*sys->sys, mea::ConstView(u, n));
    std::copy(r.begin(), r.end(), out);
    return MEA_OK;
  });
}

int mea_system_energy(const mea_system* sys, const double* u, size_t n, double* energy) {
  return guarded([&]() -> int {
    if (int s = check_state(sys, u, n, "mea_system_energy")) return s;
    if (!energy) return fail(MEA_ERR_USAGE, "mea_system_energy: null output");
    *energy = mea::energy(*sys->sys, mea::ConstView(u, n));
    return MEA_OK;
  });
}

int mea_system_step(const mea_system* sys, double* u, size_t n, double dt, int scheme) {
  return guarded([&]() -> int {
    if (int s = check_state(sys, u, n, "mea_system_step")) return s;
    if (scheme != MEA_SCHEME_RK4 && scheme != MEA_SCHEME_IF_RK4)
      return fail(MEA_ERR_USAGE, "mea_system_step: unknown scheme " + std::to_string(scheme));
    const mea::Vec next = mea::step(*sys->sys, mea::ConstView(u, n), dt,
                                    scheme == MEA_SCHEME_RK4 ? mea::Scheme::rk4 : mea::Scheme::if_rk4);
    std::copy(next.begin(), next.end(), u);
    return MEA_OK;
  });
}

int mea_snapshot_read(const char* path, double* data, size_t cap, size_t* count, double* time) {
  return guarded([&]() -> int {
    if (!path) return fail(MEA_ERR_USAGE, "mea_snapshot_read: null path");
    const mea::app::Snapshot s = mea::app::read_snapshot(path);
    if (count) *count = s.data.size();
    if (time) *time = s.time;
    if (data) std::copy_n(s.data.begin(), std::min(cap, s.data.size()), data);
    return MEA_OK;
  });
}

}  // extern "C"
