#include "mea/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <thread>

#include "mea/app/checks.hpp"
#include "mea/app/factory.hpp"
#include "mea/app/snapshot.hpp"
#include "mea/core/integrators.hpp"
#include "mea/core/vec_ops.hpp"
#include "mea/errors.hpp"
#include "mea/sphere/sphere_field.hpp"
#include "mea/torus/fourier3d.hpp"

namespace mea::app {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

std::string fmt_short(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory " + p.string() + ": " + ec.message());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + p.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + p.string());
}

// CSV with a versioned format line followed by the column header.
class CsvWriter {
 public:
  CsvWriter(const fs::path& p, const std::string& format_line, const std::vector<std::string>& columns)
      : path_(p), out_(p, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open for writing: " + p.string());
    out_ << format_line << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
    check();
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    check();
  }

 private:
  void check() {
    if (!out_) throw IoError("failed writing " + path_.string());
  }
  fs::path path_;
  std::ofstream out_;
};

RunConfig effective(const RunConfig& cfg, const CommandOptions& opt) {
  return opt.seed ? with_seed(cfg, *opt.seed) : cfg;
}

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opt) {
  return opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.string("output", "dir"));
}

struct RunOutcome {
  int code = kExitOk;
  double t = 0.0;
  double e0 = kNaN;
  double e = kNaN;
  long steps = 0;
};

// Fills `res` as it goes, so a caller catching DivergenceError still sees the
// initial energy and the last finite time.
void simulate(const RunConfig& cfg, const fs::path& dir, const Reporter& report, bool quiet, RunOutcome& res) {
  ensure_dir(dir);
  write_text(dir / "config.toml", normalize(cfg));

  const SystemPtr sys = build_system(cfg);
  const Vec u0 = initial_state(cfg, *sys);
  const IntegratorConfig ic = cfg.integrator();
  const std::vector<double> snap_times = cfg.numbers("output", "snapshot_times");
  const bool final_snapshot = cfg.boolean("output", "final_snapshot");

  std::vector<std::string> columns = {"t", "energy"};
  for (const auto& name : sys->extra_names()) columns.push_back(name);
  CsvWriter csv(dir / cfg.string("output", "csv"), "#format=mea-diagnostics/1 system=" + cfg.system(), columns);

  res.e0 = energy(*sys, u0);
  std::size_t next_snap = 0;
  try {
    integrate(*sys, u0, ic, [&](double t, ConstView u, bool record) {
      if (record) {
        const DiagnosticsRecord rec = diagnose(*sys, u, t);
        std::vector<std::string> cells = {fmt17(rec.t), fmt17(rec.energy)};
        for (const auto& [k, v] : rec.extra) cells.push_back(fmt17(v));
        csv.row(cells);
      }
      // A snapshot time is served by the first step that reaches it.
      while (next_snap < snap_times.size() && t >= snap_times[next_snap] - 1e-9 * ic.dt) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.bin", next_snap);
        write_snapshot(dir / name, make_snapshot(cfg, *sys, u, t));
        ++next_snap;
      }
      if (final_snapshot && t == ic.t_end) write_snapshot(dir / "final.bin", make_snapshot(cfg, *sys, u, t));
      res.t = t;
      res.e = energy(*sys, u);
      if (t > 0.0) ++res.steps;
    });
  } catch (const DivergenceError& e) {
    if (!e.last_state().empty() && e.last_state().size() == sys->dim())
      write_snapshot(dir / "last_finite.bin", make_snapshot(cfg, *sys, e.last_state(), e.last_time()));
    throw;
  }

  if (!quiet) {
    const double drift = std::abs(res.e - res.e0) / std::max(std::abs(res.e0), 1e-300);
    report(Stream::out, "run " + cfg.system() + ": " + std::to_string(res.steps) + " steps to t=" + fmt_short(res.t) +
                            ", energy " + fmt17(res.e) + ", relative drift " + fmt_short(drift) + " -> " +
                            dir.string());
  }
}

// Final state of one integration; DivergenceError propagates.
Vec integrate_to_end(const FlowSystem& sys, ConstView u0, const IntegratorConfig& ic,
                     const StepObserver& extra = nullptr) {
  Vec last;
  integrate(sys, u0, ic, [&](double t, ConstView u, bool record) {
    if (extra) extra(t, u, record);
    if (t == ic.t_end) last.assign(u.begin(), u.end());
  });
  return last;
}

[[noreturn]] void case_error(const RunConfig& cfg, const std::string& msg) {
  throw ConfigError(ConfigError::Kind::schema, cfg.origin + ": " + msg, 0, "case");
}

struct Level {
  double level = 0.0;
  double error = kNaN;
  std::string status = "ok";
};

Value number_value(double x) { return Value::number(x); }

// Error of each dt level against an exact final state.
std::vector<Level> dt_levels_exact(const RunConfig& cfg, const std::vector<double>& dts,
                                   const std::function<Vec(const FlowSystem&, ConstView)>& exact) {
  std::vector<Level> out;
  for (double dt : dts) {
    const RunConfig c = with_value(cfg, "integrator.dt", number_value(dt));
    const SystemPtr sys = build_system(c);
    const Vec u0 = initial_state(c, *sys);
    Level lv{dt};
    try {
      const Vec u = integrate_to_end(*sys, u0, c.integrator());
      const Vec ref = exact(*sys, u0);
      lv.error = sys->norm(vec::sub(u, ref)) / sys->norm(ref);
    } catch (const DivergenceError& e) {
      lv.status = "divergence at t=" + fmt_short(e.last_time());
    }
    out.push_back(lv);
  }
  return out;
}

}  // namespace

Reporter console_reporter() {
  return [](Stream s, const std::string& line) {
    if (s == Stream::out) {
      std::cout << line << '\n';
      std::cout.flush();
    } else {
      std::cerr << line << '\n';
    }
  };
}

int exit_code_for(std::exception_ptr e, const Reporter& report) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    report(Stream::err, std::string("config error [") + ConfigError::kind_name(x.kind()) + "]: " + x.what());
    return kExitConfig;
  } catch (const DivergenceError& x) {
    report(Stream::err, std::string("divergence: ") + x.what());
    return kExitDivergence;
  } catch (const SolverError& x) {
    report(Stream::err, std::string("solver failure: ") + x.what());
    return kExitSolver;
  } catch (const IoError& x) {
    report(Stream::err, std::string("i/o error: ") + x.what());
    return kExitIo;
  } catch (const std::exception& x) {
    report(Stream::err, std::string("error: ") + x.what());
    return kExitUsage;
  } catch (...) {
    report(Stream::err, "error: unknown exception");
    return kExitUsage;
  }
}

int run_command(const RunConfig& cfg, const CommandOptions& opt) {
  try {
    const RunConfig c = effective(cfg, opt);
    RunOutcome res;
    simulate(c, output_dir(c, opt), opt.report, opt.quiet, res);
    return kExitOk;
  } catch (...) {
    return exit_code_for(std::current_exception(), opt.report);
  }
}

int check_command(const RunConfig* cfg, const CommandOptions& opt) {
  try {
    CheckOptions co;
    if (cfg) {
      co.seed = cfg->seed();
      if (cfg->has("check", "samples")) {
        co.samples = static_cast<int>(cfg->integer("check", "samples"));
        co.strength = cfg->number("check", "strength");
        co.flip_bracket = cfg->boolean("check", "flip_bracket");
      }
    }
    if (opt.seed) co.seed = *opt.seed;
    co.flip_bracket = co.flip_bracket || opt.flip_bracket;

    int failed = 0;
    const auto results = run_check_suite(co);
    for (const auto& r : results) {
      if (!r.passed) ++failed;
      if (!opt.quiet || !r.passed) opt.report(Stream::out, format_check(r));
    }
    opt.report(Stream::out, "checks: " + std::to_string(results.size() - failed) + " passed, " +
                                std::to_string(failed) + " failed (seed " + std::to_string(co.seed) +
                                (co.flip_bracket ? ", flipped bracket" : "") + ")");
    return failed ? kExitCheck : kExitOk;
  } catch (...) {
    return exit_code_for(std::current_exception(), opt.report);
  }
}

int convergence_command(const RunConfig& cfg_in, const CommandOptions& opt) {
  try {
    const RunConfig cfg = effective(cfg_in, opt);
    if (!cfg.has("convergence", "case")) case_error(cfg, "the convergence command needs a [convergence] section");
    const std::string kase = cfg.string("convergence", "case");
    std::vector<double> levels = cfg.numbers("convergence", "levels");
    std::string refine = "dt";
    std::string reference = "exact";
    std::vector<Level> table;

    if (kase == "qg-rossby-haurwitz") {
      refine = "lmax";
      reference = "phase speed 2a/(Ro rc l(l+1)) toward increasing longitude";
      if (cfg.number("system", "gamma") != 0.0 || cfg.string("system", "topography") != "zero")
        case_error(cfg, "qg-rossby-haurwitz needs gamma = 0 and a flat bottom");
      if (cfg.string("initial", "preset") != "rossby-haurwitz" || cfg.integer("initial", "order") < 1)
        case_error(cfg, "qg-rossby-haurwitz needs initial.preset = \"rossby-haurwitz\" with order >= 1");
      std::sort(levels.begin(), levels.end());
      const int l = static_cast<int>(cfg.integer("initial", "degree"));
      const int m = static_cast<int>(cfg.integer("initial", "order"));
      const double c_exact = 2.0 * cfg.number("system", "a") /
                             (cfg.number("system", "Ro") * cfg.number("system", "radius_convention") * l * (l + 1.0));
      for (double L : levels) {
        const RunConfig c = with_value(cfg, "discretization.lmax", Value::integer(static_cast<long long>(L)));
        const SystemPtr sys = build_system(c);
        const Vec u0 = initial_state(c, *sys);
        const auto ic = c.integrator();
        const std::size_t ic_cos = sphere::SphereField::index(static_cast<int>(L), l, m);
        const std::size_t ic_sin = sphere::SphereField::index(static_cast<int>(L), l, -m);
        // Unwrapped phase of the (l, m) pair. With {z, f} = -d/dlambda f the
        // pattern cos(m (lambda - c t)) moves toward increasing longitude, so
        // atan2(sin part, cos part) grows like m c t.
        double theta = std::atan2(u0[ic_sin], u0[ic_cos]);
        const double theta0 = theta;
        Level lv{L};
        try {
          integrate_to_end(*sys, u0, ic, [&](double, ConstView u, bool) {
            const double now = std::atan2(u[ic_sin], u[ic_cos]);
            theta += std::remainder(now - theta, 2.0 * std::numbers::pi);
          });
          const double c_measured = (theta - theta0) / (m * ic.t_end);
          lv.error = std::abs(c_measured - c_exact) / std::abs(c_exact);
          lv.status = "phase speed " + fmt17(c_measured) + " vs " + fmt17(c_exact);
        } catch (const DivergenceError& e) {
          lv.status = "divergence at t=" + fmt_short(e.last_time());
        }
        table.push_back(lv);
      }
    } else {
      std::sort(levels.begin(), levels.end(), std::greater<>());
      if (kase == "kdv-linear") {
        const RunConfig c = with_value(cfg, "system.linear_only", Value::boolean(true));
        const double T = c.number("integrator", "t_end");
        reference = "exact Fourier phase factor";
        table = dt_levels_exact(c, levels, [T](const FlowSystem& sys, ConstView u0) {
          return sys.linear_symbol()->propagate(u0, T);
        });
      } else if (kase == "ic-shear") {
        if (cfg.string("initial", "preset") != "shear" || cfg.has("system", "B_file"))
          case_error(cfg, "ic-shear needs initial.preset = \"shear\" and a constant B");
        const auto B = cfg.numbers("system", "B");
        if (B[0] != 0.0 || B[1] != 0.0) case_error(cfg, "ic-shear needs B parallel to the z axis");
        reference = "exact rotation at frequency a b";
        const double w = cfg.number("system", "a") * B[2] * cfg.number("integrator", "t_end");
        table = dt_levels_exact(cfg, levels, [w](const FlowSystem& sys, ConstView u0) {
          // Horizontal components rotate: ux' = ab uy, uy' = -ab ux.
          const std::size_t third = sys.dim() / 3;
          Vec ref(u0.begin(), u0.end());
          for (std::size_t i = 0; i < third; ++i) {
            ref[i] = std::cos(w) * u0[i] + std::sin(w) * u0[third + i];
            ref[third + i] = -std::sin(w) * u0[i] + std::cos(w) * u0[third + i];
          }
          return ref;
        });
      } else {
        reference = "finest level";
        std::vector<Vec> finals;
        SystemPtr sys;
        for (double dt : levels) {
          const RunConfig c = with_value(cfg, "integrator.dt", number_value(dt));
          sys = build_system(c);
          Level lv{dt};
          try {
            finals.push_back(integrate_to_end(*sys, initial_state(c, *sys), c.integrator()));
          } catch (const DivergenceError& e) {
            lv.status = "divergence at t=" + fmt_short(e.last_time());
            finals.emplace_back();
          }
          table.push_back(lv);
        }
        const Vec& ref = finals.back();
        table.back().status = ref.empty() ? table.back().status : "reference";
        for (std::size_t i = 0; i + 1 < finals.size(); ++i)
          if (!finals[i].empty() && !ref.empty())
            table[i].error = sys->norm(vec::sub(finals[i], ref)) / sys->norm(ref);
      }
    }

    // Orders between consecutive levels and a least-squares fit over all.
    std::vector<double> orders(table.size(), kNaN);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double e = table[i].error;
      if (refine == "dt" && std::isfinite(e) && e > 0.0) {
        const double x = std::log(table[i].level), y = std::log(e);
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
        if (i > 0 && std::isfinite(table[i - 1].error) && table[i - 1].error > 0.0)
          orders[i] = std::log(table[i - 1].error / e) / std::log(table[i - 1].level / table[i].level);
      }
    }
    const double fitted = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : kNaN;

    const fs::path dir = output_dir(cfg, opt);
    ensure_dir(dir);
    write_text(dir / "config.toml", normalize(cfg));
    CsvWriter csv(dir / "convergence.csv",
                  "#format=mea-convergence/1 case=" + kase + " refine=" + refine + " fitted_order=" + fmt17(fitted),
                  {"level", "error", "order", "status"});
    for (std::size_t i = 0; i < table.size(); ++i)
      csv.row({fmt17(table[i].level), fmt17(table[i].error), fmt17(orders[i]), table[i].status});

    if (!opt.quiet) {
      opt.report(Stream::out, "convergence " + kase + " (" + refine + " refinement, reference: " + reference + ")");
      for (std::size_t i = 0; i < table.size(); ++i)
        opt.report(Stream::out, "  " + refine + "=" + fmt_short(table[i].level) + "  error=" + fmt_short(table[i].error) +
                                    "  order=" + fmt_short(orders[i]) + "  " + table[i].status);
      std::string tail;
      if (refine == "dt") {
        tail = "  fitted order " + fmt_short(fitted);
      } else {
        // Spectral refinement has no algebraic order to fit.
        double worst = 0.0;
        for (const auto& lv : table) worst = std::max(worst, lv.error);
        tail = "  largest error " + fmt_short(worst);
      }
      opt.report(Stream::out, tail + " -> " + (dir / "convergence.csv").string());
    }
    return kExitOk;
  } catch (...) {
    return exit_code_for(std::current_exception(), opt.report);
  }
}

int sweep_command(const RunConfig& cfg_in, const CommandOptions& opt) {
  try {
    const RunConfig cfg = effective(cfg_in, opt);
    if (!cfg.has("sweep", "parameter")) case_error(cfg, "the sweep command needs a [sweep] section");
    const std::string param = cfg.string("sweep", "parameter");
    const std::vector<Value> values = cfg.doc.find("sweep", "values")->items;
    const fs::path dir = output_dir(cfg, opt);
    ensure_dir(dir);
    write_text(dir / "config.toml", normalize(cfg));

    std::size_t threads = static_cast<std::size_t>(cfg.integer("sweep", "threads"));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, values.size());

    std::vector<RunOutcome> outcomes(values.size());
    std::vector<std::vector<std::string>> logs(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < values.size(); i = next++) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", i);
        const fs::path run_dir = dir / name;
        auto& log = logs[i];
        const Reporter collect = [&log](Stream, const std::string& line) { log.push_back(line); };
        try {
          ensure_dir(run_dir);
          RunConfig c = with_value(cfg, param, values[i]);
          c = with_value(c, "output.dir", Value::string(run_dir.string()));
          simulate(c, run_dir, collect, false, outcomes[i]);
        } catch (...) {
          outcomes[i].code = exit_code_for(std::current_exception(), collect);
        }
        try {
          std::string text;
          for (const auto& line : log) text += line + "\n";
          write_text(run_dir / "run.log", text);
        } catch (const IoError&) {
          if (outcomes[i].code == kExitOk) outcomes[i].code = kExitIo;
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    CsvWriter csv(dir / "sweep.csv", "#format=mea-sweep/1 parameter=" + param,
                  {"run", "value", "exit_code", "t_final", "energy_initial", "energy_final"});
    int first_failure = kExitOk;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& o = outcomes[i];
      csv.row({std::to_string(i), values[i].render(), std::to_string(o.code), fmt17(o.t), fmt17(o.e0), fmt17(o.e)});
      if (o.code != kExitOk && first_failure == kExitOk) first_failure = o.code;
      if (o.code != kExitOk)
        for (const auto& line : logs[i]) opt.report(Stream::err, param + "=" + values[i].render() + ": " + line);
      else if (!opt.quiet)
        opt.report(Stream::out, param + "=" + values[i].render() + ": " + (logs[i].empty() ? "ok" : logs[i].back()));
    }
    if (!opt.quiet)
      opt.report(Stream::out, "sweep over " + param + ": " + std::to_string(values.size()) + " runs on " +
                                  std::to_string(threads) + " threads -> " + (dir / "sweep.csv").string());
    return first_failure;
  } catch (...) {
    return exit_code_for(std::current_exception(), opt.report);
  }
}

}  // namespace mea::app
