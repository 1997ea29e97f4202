#include <doctest.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mea/app/checks.hpp"
#include "mea/app/commands.hpp"
#include "mea/app/config.hpp"
#include "mea/app/factory.hpp"
#include "mea/app/snapshot.hpp"
#include "mea/core/integrators.hpp"
#include "mea/errors.hpp"

using namespace mea;
using namespace mea::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mea_app_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ConfigError::Kind kind_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("config was accepted: " << text);
  return ConfigError::Kind::syntax;
}

struct Captured {
  std::vector<std::string> out, err;
  Reporter reporter() {
    return [this](Stream s, const std::string& line) { (s == Stream::out ? out : err).push_back(line); };
  }
};

}  // namespace

TEST_CASE("config syntax errors carry the line") {
  try {
    parse_config_string("[system]\nname = \"kdv\"\na = = 1\n", ".", "x.toml");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::syntax);
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("x.toml:3") != std::string::npos);
  }
  CHECK(kind_of("[system]\nname = \"kdv\n") == ConfigError::Kind::syntax);
  CHECK(kind_of("name = \"kdv\"\n") == ConfigError::Kind::syntax);
  CHECK(kind_of("[system]\nname = \"kdv\"\nname = \"ch\"\n") == ConfigError::Kind::syntax);
  CHECK(kind_of("[system]\nname = \"kdv\"\n[system]\n") == ConfigError::Kind::syntax);
}

TEST_CASE("config unknown keys and schema violations") {
  try {
    parse_config_string("[system]\nname = \"kdv\"\nalpa = 1\n");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::unknown_key);
    CHECK(e.key() == "alpa");
    CHECK(std::string(e.what()).find("alpa") != std::string::npos);
  }
  CHECK(kind_of("[system]\nname = \"kdv\"\n[bogus]\n") == ConfigError::Kind::unknown_key);
  CHECK(kind_of("[system]\nname = \"nope\"\n") == ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"kdv\"\nalpha = \"one\"\n") == ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"kdv\"\n[integrator]\ndt = -1\n") == ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"burgers\"\na = 1\n") == ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"extended:kdv\"\n[integrator]\nscheme = \"if_rk4\"\n") ==
        ConfigError::Kind::schema);
  // A key that exists for another preset is still not accepted here.
  CHECK(kind_of("[system]\nname = \"kdv\"\n[initial]\npreset = \"constant\"\nband = 3\n") ==
        ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"qg\"\n[initial]\npreset = \"zonal\"\nmean = 0.5\n") ==
        ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"ic\"\n[output]\nsnapshot_times = [0.5, 0.2]\n") ==
        ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"qg\"\n[convergence]\ncase = \"kdv-linear\"\n") ==
        ConfigError::Kind::schema);
  CHECK(kind_of("[system]\nname = \"kdv\"\n[sweep]\nparameter = \"system.name\"\nvalues = [1]\n") ==
        ConfigError::Kind::schema);
  CHECK_THROWS_AS(parse_config("/nonexistent/dir/cfg.toml"), ConfigError);
  try {
    parse_config("/nonexistent/dir/cfg.toml");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::missing_file);
  }
}

TEST_CASE("normalization fills defaults and is idempotent") {
  for (const std::string name : {"burgers", "kdv", "ch", "gch", "extended:kdv", "qg", "ic", "extended:ic"}) {
    const RunConfig c = parse_config_string("[system]\nname = \"" + name + "\"\n");
    const std::string once = normalize(c);
    CHECK(normalize(parse_config_string(once)) == once);
    CHECK(c.has("integrator", "dt"));
    CHECK(c.has("run", "seed"));
  }
  const RunConfig kdv = parse_config_string("# comment\n[system]\nname = \"kdv\"\n[integrator]\ndt = 0.00100\n");
  CHECK(kdv.number("system", "a") == 1.0);
  CHECK(kdv.string("integrator", "scheme") == "if_rk4");
  CHECK(kdv.number("integrator", "dt") == 1e-3);
  CHECK(parse_config_string("[system]\nname = \"extended:gch\"\n").string("integrator", "scheme") == "rk4");

  const RunConfig qg = parse_config_string(
      "[system]\nname = \"qg\"\ntopography = \"gaussian-bump\"\n[initial]\npreset = \"rossby-haurwitz\"\n");
  CHECK(qg.number("system", "bump_width") == 0.3);
  CHECK(qg.integer("initial", "degree") == 4);

  const RunConfig moved = with_value(kdv, "discretization.K", Value::integer(48));
  CHECK(moved.integer("discretization", "K") == 48);
  CHECK_THROWS_AS(with_value(kdv, "discretization.K", Value::integer(-3)), ConfigError);
  CHECK(with_seed(kdv, 99).seed() == 99);
}

TEST_CASE("relative paths resolve against the config directory") {
  const fs::path dir = scratch("paths");
  std::ofstream(dir / "c.toml") << "[system]\nname = \"kdv\"\n[initial]\npreset = \"file\"\nfile = \"u0.bin\"\n";
  try {
    parse_config(dir / "c.toml");
    FAIL("missing data file accepted");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::missing_file);
  }
  const RunConfig base = parse_config_string("[system]\nname = \"kdv\"\n[discretization]\nK = 16\n");
  const SystemPtr sys = build_system(base);
  write_snapshot(dir / "u0.bin", make_snapshot(base, *sys, initial_state(base, *sys), 0.0));
  const RunConfig c = parse_config(dir / "c.toml");
  CHECK(c.resolve("u0.bin") == dir / "u0.bin");
  // Wrong truncation in the data file is a schema problem, not a crash.
  CHECK_THROWS_AS(initial_state(c, *build_system(c)), ConfigError);
}

TEST_CASE("snapshot round trip is bit exact") {
  const fs::path dir = scratch("snap");
  Snapshot s;
  s.system = "kdv";
  s.layout = layout_descriptor("kdv");
  s.truncation_name = "K";
  s.truncation = 3;
  s.time = 0.1;
  s.quantity = "velocity";
  s.parameters = {{"a", 1.0}, {"alpha", 0.3}};
  s.data = {0.1, -0.0, 1e-310, std::numbers::pi, -2.5, 7.0, 1.0 / 3.0};
  write_snapshot(dir / "s.bin", s);
  const Snapshot r = read_snapshot(dir / "s.bin");
  CHECK(r.system == s.system);
  CHECK(r.layout == s.layout);
  CHECK(r.truncation == 3);
  CHECK(r.time == s.time);
  CHECK(r.parameters == s.parameters);
  REQUIRE(r.data.size() == s.data.size());
  for (std::size_t i = 0; i < s.data.size(); ++i)
    CHECK(std::bit_cast<std::uint64_t>(r.data[i]) == std::bit_cast<std::uint64_t>(s.data[i]));

  Snapshot blown = s;
  blown.parameters["energy"] = HUGE_VAL;
  write_snapshot(dir / "inf.bin", blown);
  CHECK(read_snapshot(dir / "inf.bin").parameters == s.parameters);

  const std::string bytes = slurp(dir / "s.bin");
  CHECK(bytes.substr(0, 8) == "MEASNAP1");
  std::ofstream(dir / "short.bin", std::ios::binary) << bytes.substr(0, bytes.size() - 4);
  CHECK_THROWS_AS(read_snapshot(dir / "short.bin"), IoError);
  std::string bad = bytes;
  bad[0] = 'X';
  std::ofstream(dir / "magic.bin", std::ios::binary) << bad;
  CHECK_THROWS_AS(read_snapshot(dir / "magic.bin"), IoError);
  CHECK_THROWS_AS(read_snapshot(dir / "absent.bin"), IoError);
}

TEST_CASE("initial presets use rms amplitudes") {
  // E = 1/2 <u, A u>; with A = 1 and rms amplitude c the energy is c^2 L / 2.
  const RunConfig c = parse_config_string(
      "[system]\nname = \"kdv\"\n[discretization]\nK = 16\n[initial]\npreset = \"cosine\"\namplitude = 2\n");
  const SystemPtr sys = build_system(c);
  CHECK(energy(*sys, initial_state(c, *sys)) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));

  const RunConfig ic = parse_config_string(
      "[system]\nname = \"ic\"\n[discretization]\nK = 4\n[initial]\npreset = \"taylor-green\"\namplitude = 0.5\n");
  const SystemPtr isys = build_system(ic);
  const double vol = std::pow(2.0 * std::numbers::pi, 3);
  CHECK(energy(*isys, initial_state(ic, *isys)) == doctest::Approx(0.125 * vol).epsilon(1e-13));

  const RunConfig ext = parse_config_string("[system]\nname = \"extended:kdv\"\na = 0.7\n[discretization]\nK = 8\n");
  const SystemPtr esys = build_system(ext);
  const Vec u = initial_state(ext, *esys);
  CHECK(u.size() == esys->dim());
  CHECK(u.back() == 0.7);

  const RunConfig r1 = parse_config_string("[system]\nname = \"qg\"\n[discretization]\nlmax = 10\n[run]\nseed = 5\n");
  const RunConfig r2 = with_seed(r1, 6);
  CHECK(initial_state(r1, *build_system(r1)) == initial_state(r1, *build_system(r1)));
  CHECK(initial_state(r1, *build_system(r1)) != initial_state(r2, *build_system(r2)));
}

TEST_CASE("run writes diagnostics and snapshots deterministically") {
  const fs::path dir = scratch("run");
  const RunConfig c = parse_config_string(
      "[system]\nname = \"gch\"\n[discretization]\nK = 16\n[integrator]\ndt = 0.01\nt_end = 0.1\n"
      "[initial]\npreset = \"random\"\n[output]\nsnapshot_times = [0.05]\n");
  Captured cap;
  CommandOptions opt;
  opt.report = cap.reporter();
  opt.quiet = true;
  opt.out_dir = (dir / "a").string();
  REQUIRE(run_command(c, opt) == kExitOk);
  opt.out_dir = (dir / "b").string();
  REQUIRE(run_command(c, opt) == kExitOk);
  CHECK(cap.out.empty());
  for (const char* f : {"config.toml", "diagnostics.csv", "snapshot_000.bin", "final.bin"}) {
    REQUIRE(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const std::string csv = slurp(dir / "a" / "diagnostics.csv");
  CHECK(csv.rfind("#format=mea-diagnostics/1 system=gch\nt,energy,", 0) == 0);
  CHECK(read_snapshot(dir / "a" / "snapshot_000.bin").time == doctest::Approx(0.05));
  CHECK(read_snapshot(dir / "a" / "final.bin").time == 0.1);
  // The echoed config reproduces the run.
  CHECK(normalize(parse_config(dir / "a" / "config.toml")) == normalize(with_value(c, "output.dir",
                                                                                  Value::string("out"))));
}

TEST_CASE("divergence maps to its exit code and keeps the last finite state") {
  const fs::path dir = scratch("diverge");
  const RunConfig c = parse_config_string(
      "[system]\nname = \"burgers\"\n[discretization]\nK = 128\n[integrator]\nscheme = \"rk4\"\ndt = 0.01\n"
      "t_end = 5\n[initial]\npreset = \"cosine\"\namplitude = 5\n");
  Captured cap;
  CommandOptions opt;
  opt.report = cap.reporter();
  opt.out_dir = dir.string();
  CHECK(run_command(c, opt) == kExitDivergence);
  REQUIRE(!cap.err.empty());
  CHECK(cap.err.back().find("last finite t=") != std::string::npos);
  const Snapshot last = read_snapshot(dir / "last_finite.bin");
  CHECK(last.time > 0.0);
  for (double x : last.data) CHECK(std::isfinite(x));
}

TEST_CASE("exit code mapping") {
  Captured cap;
  const Reporter r = cap.reporter();
  auto code = [&](auto e) { return exit_code_for(std::make_exception_ptr(e), r); };
  CHECK(code(ConfigError(ConfigError::Kind::schema, "m")) == kExitConfig);
  CHECK(code(DivergenceError("k1", 0.5, {})) == kExitDivergence);
  CHECK(code(NonInvertibleMode("m")) == kExitSolver);
  CHECK(code(IoError("m")) == kExitIo);
  CHECK(code(ContractViolation("m")) == kExitUsage);
  CHECK(code(std::runtime_error("m")) == kExitUsage);
  CHECK(cap.err.size() == 6);
}

TEST_CASE("convergence command measures fourth order") {
  const fs::path dir = scratch("conv");
  const RunConfig c = parse_config_string(
      "[system]\nname = \"kdv\"\n[discretization]\nK = 16\n[integrator]\nscheme = \"rk4\"\nt_end = 0.5\n"
      "[initial]\npreset = \"random\"\nband = 5\n[convergence]\ncase = \"kdv-linear\"\n");
  Captured cap;
  CommandOptions opt;
  opt.report = cap.reporter();
  opt.out_dir = dir.string();
  REQUIRE(convergence_command(c, opt) == kExitOk);
  const std::string csv = slurp(dir / "convergence.csv");
  const auto pos = csv.find("fitted_order=");
  REQUIRE(pos != std::string::npos);
  const double order = std::stod(csv.substr(pos + 13));
  CHECK(order == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("sweep isolates runs and reports the first failure") {
  const fs::path dir = scratch("sweep");
  const RunConfig c = parse_config_string(
      "[system]\nname = \"burgers\"\n[discretization]\nK = 128\n[integrator]\nscheme = \"rk4\"\ndt = 0.01\n"
      "t_end = 0.5\n[initial]\npreset = \"cosine\"\n[sweep]\nparameter = \"initial.amplitude\"\n"
      "values = [0.1, 5, 0.2]\nthreads = 2\n");
  Captured cap;
  CommandOptions opt;
  opt.report = cap.reporter();
  opt.out_dir = dir.string();
  CHECK(sweep_command(c, opt) == kExitDivergence);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("\n0,0.1,0,") != std::string::npos);
  CHECK(csv.find("\n1,5,3,") != std::string::npos);
  CHECK(csv.find("\n2,0.2,0,") != std::string::npos);
  CHECK(parse_config(dir / "run_001" / "config.toml").number("initial", "amplitude") == 5.0);
  CHECK(fs::exists(dir / "run_001" / "last_finite.bin"));
}

TEST_CASE("invariant suite passes and its negative control fails") {
  CheckOptions opt;
  opt.samples = 4;
  opt.circle_K = 16;
  opt.sphere_lmax = 8;
  opt.torus_K = 3;
  opt.extension_steps = 20;
  opt.scaling_steps = 5;
  opt.momentum_steps = 5;
  for (const auto& r : run_check_suite(opt)) CHECK_MESSAGE(r.passed, format_check(r));
  opt.flip_bracket = true;
  int failed = 0;
  for (const auto& r : pairing_identity_checks(opt)) failed += !r.passed;
  CHECK(failed > 0);
}
