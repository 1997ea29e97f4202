#include "mea/app/factory.hpp"

#include <cmath>
#include <numbers>

#include "mea/app/random_fields.hpp"
#include "mea/circle/circle_system.hpp"
#include "mea/core/extension.hpp"
#include "mea/errors.hpp"
#include "mea/sphere/qg.hpp"
#include "mea/sphere/transform.hpp"
#include "mea/torus/ic.hpp"

namespace mea::app {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void data_error(const RunConfig& cfg, const std::string& msg) {
  throw ConfigError(ConfigError::Kind::schema, cfg.origin + ": " + msg, 0, {});
}

// Loads a snapshot referenced by the config; unreadable files are config errors.
Snapshot load(const RunConfig& cfg, const char* section, const char* key) {
  const auto path = cfg.resolve(cfg.string(section, key));
  try {
    return read_snapshot(path);
  } catch (const IoError& e) {
    data_error(cfg, std::string(section) + "." + key + ": " + e.what());
  }
}

void expect_layout(const RunConfig& cfg, const Snapshot& s, const std::string& layout, const char* truncation_name,
                   long long truncation, std::size_t count, const char* what) {
  if (s.layout != layout || s.truncation_name != truncation_name || s.truncation != truncation ||
      s.data.size() != count)
    data_error(cfg, std::string(what) + " has layout '" + s.layout + "' with " + s.truncation_name + "=" +
                        std::to_string(s.truncation) + "; expected '" + layout + "' with " + truncation_name + "=" +
                        std::to_string(truncation));
}

circle::CircleSystemConfig circle_config(const RunConfig& cfg) {
  circle::CircleSystemConfig c;
  c.alpha = cfg.number("system", "alpha");
  c.beta = cfg.number("system", "beta");
  c.a = cfg.number("system", "a");
  c.K = static_cast<int>(cfg.integer("discretization", "K"));
  c.L = cfg.number("system", "period");
  c.dealias = cfg.boolean("discretization", "dealias");
  c.linear_only = cfg.boolean("system", "linear_only");
  return c;
}

sphere::QGConfig qg_config(const RunConfig& cfg) {
  sphere::QGConfig q;
  q.gamma = cfg.number("system", "gamma");
  q.Ro = cfg.number("system", "Ro");
  q.a = cfg.number("system", "a");
  q.lmax = static_cast<int>(cfg.integer("discretization", "lmax"));
  q.radius_convention = cfg.number("system", "radius_convention");
  q.phi_topography_over_Ro = cfg.boolean("system", "phi_topography_over_Ro");
  q.dealias = cfg.boolean("discretization", "dealias");
  q.h = build_topography(cfg);
  return q;
}

torus::ICConfig ic_config(const RunConfig& cfg) {
  torus::ICConfig c;
  c.a = cfg.number("system", "a");
  c.K = static_cast<int>(cfg.integer("discretization", "K"));
  c.dealias = cfg.boolean("discretization", "dealias");
  if (cfg.has("system", "B_file")) {
    const Snapshot s = load(cfg, "system", "B_file");
    expect_layout(cfg, s, layout_descriptor("ic"), "K", c.K, torus::Fourier3DVectorField::real_dim(c.K),
                  "system.B_file");
    c.B_field = torus::Fourier3DVectorField::from_real(s.data, c.K);
  } else {
    const auto b = cfg.numbers("system", "B");
    c.B = {b[0], b[1], b[2]};
  }
  return c;
}

template <typename F>
F scaled_to_rms(F f, double rms_now, double target) {
  if (rms_now > 0.0) f *= target / rms_now;
  return f;
}

Vec circle_initial(const RunConfig& cfg, const circle::CircleSystemConfig& c) {
  const std::string& preset = cfg.string("initial", "preset");
  circle::Fourier1DField u = circle::Fourier1DField::zeros(c.K, c.L);
  if (preset == "constant") {
    u.coeffs[0] = cfg.number("initial", "value");
  } else if (preset == "cosine") {
    u.coeffs[0] = cfg.number("initial", "value");
    // A cos(k x) has rms A / sqrt(2).
    u.coeffs[cfg.integer("initial", "mode")] = std::sqrt(0.5) * cfg.number("initial", "amplitude");
  } else if (preset == "random") {
    Rng rng(cfg.seed());
    u = random_circle(c.K, static_cast<int>(cfg.integer("initial", "band")), rng, c.L, false);
    const double rms = std::sqrt(circle::l2_pairing(u, u) / c.L);
    const double amp = cfg.number("initial", "amplitude");
    for (auto& x : u.coeffs) x *= rms > 0.0 ? amp / rms : 0.0;
    u.coeffs[0] = cfg.number("initial", "value");
  }
  return u.to_real();
}

Vec qg_initial(const RunConfig& cfg, const sphere::QGConfig& q) {
  using sphere::SphereField;
  const std::string& preset = cfg.string("initial", "preset");
  const double amp = preset == "rest" ? 0.0 : cfg.number("initial", "amplitude");
  const double area = 4.0 * kPi;
  SphereField r = SphereField::zeros(q.lmax);
  Rng rng(cfg.seed());
  if (preset == "zonal") {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int l = 1; l <= std::min<long long>(cfg.integer("initial", "band"), q.lmax); ++l)
      r.set(l, 0, n(rng) / (1.0 + l));
  } else if (preset == "random") {
    r = random_sphere(q.lmax, static_cast<int>(cfg.integer("initial", "band")), rng, false);
  } else if (preset == "rossby-haurwitz") {
    r.set(static_cast<int>(cfg.integer("initial", "degree")), static_cast<int>(cfg.integer("initial", "order")),
          1.0);
  }
  r = scaled_to_rms(r, r.l2_norm() / std::sqrt(area), amp);
  // Constant c has coefficient c sqrt(4 pi) on Y_00.
  r.set(0, 0, cfg.number("initial", "mean") * std::sqrt(area));
  return sphere::invert_stream(r, q).coeffs;
}

Vec ic_initial(const RunConfig& cfg, int K) {
  using torus::Fourier3DVectorField;
  const std::string& preset = cfg.string("initial", "preset");
  Fourier3DVectorField u = Fourier3DVectorField::zeros(K);
  if (preset == "shear") {
    // sin(m z) in the x component.
    u.at(0, 0, 0, static_cast<int>(cfg.integer("initial", "mode"))) = torus::cplx(0.0, -0.5);
  } else if (preset == "taylor-green") {
    const int n = torus::product_grid_size(K, false);
    torus::GridVectorField g;
    g.n = n;
    for (auto& comp : g.v) comp.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = 2 * kPi * i / n, y = 2 * kPi * j / n, z = 2 * kPi * k / n;
          const std::size_t p = (static_cast<std::size_t>(i) * n + j) * n + k;
          g.v[0][p] = std::sin(x) * std::cos(y) * std::cos(z);
          g.v[1][p] = -std::cos(x) * std::sin(y) * std::cos(z);
        }
    u = torus::analyze(g, K);
    u.symmetrize();
  } else if (preset == "random") {
    Rng rng(cfg.seed());
    u = random_torus(K, static_cast<int>(cfg.integer("initial", "band")), rng);
  }
  if (preset != "rest") {
    const double volume = 8 * kPi * kPi * kPi;
    u = scaled_to_rms(u, std::sqrt(2.0 * torus::energy3d(u) / volume), cfg.number("initial", "amplitude"));
  }
  return u.to_real();
}

std::string truncation_name(const RunConfig& cfg) { return cfg.family() == "qg" ? "lmax" : "K"; }
long long truncation(const RunConfig& cfg) { return cfg.integer("discretization", truncation_name(cfg)); }

}  // namespace

std::string layout_descriptor(const std::string& system) {
  const std::string prefix = "extended:";
  if (system.rfind(prefix, 0) == 0) return layout_descriptor(system.substr(prefix.size())) + " + [charge a]";
  if (system == "qg")
    return "sh-real-orthonormal/1: m=0 column l=0..lmax, then for m=1..lmax cos column l=m..lmax, "
           "sin column l=m..lmax";
  if (system == "ic")
    return "fourier3d-halfz/1: components x,y,z; kx,ky in -K..K, kz in 0..K, kz fastest; (re,im) pairs";
  return "fourier1d-half/1: c0, re c1, im c1, ..., re cK, im cK";
}

sphere::SphereField build_topography(const RunConfig& cfg) {
  using sphere::SphereField;
  const int lmax = static_cast<int>(cfg.integer("discretization", "lmax"));
  const std::string& kind = cfg.string("system", "topography");
  if (kind == "zero") return SphereField::zeros(lmax);
  if (kind == "file") {
    const Snapshot s = load(cfg, "system", "topography_file");
    if (s.layout != layout_descriptor("qg") || s.truncation_name != "lmax" ||
        s.data.size() != SphereField::size(static_cast<int>(s.truncation)))
      data_error(cfg, "system.topography_file does not hold spherical-harmonic coefficients");
    return SphereField{static_cast<int>(s.truncation), s.data}.retruncated(lmax);
  }
  const double amp = cfg.number("system", "topography_amplitude");
  const auto tr = sphere::SphereTransform::padded(lmax);
  const auto& grid = tr->grid();
  std::vector<double> v(grid.points());
  for (int j = 0; j < grid.nlat; ++j) {
    const double z = grid.z[j];
    for (int i = 0; i < grid.nlon; ++i) {
      double h = 0.0;
      if (kind == "zonal:P2") {
        h = amp * 0.5 * (3 * z * z - 1);
      } else {
        const double zc = cfg.number("system", "bump_z");
        const double lon = cfg.number("system", "bump_lon");
        const double cosd = z * zc + std::sqrt((1 - z * z) * (1 - zc * zc)) * std::cos(grid.longitude(i) - lon);
        const double d = std::acos(std::clamp(cosd, -1.0, 1.0)) / cfg.number("system", "bump_width");
        h = amp * std::exp(-d * d);
      }
      v[static_cast<std::size_t>(j) * grid.nlon + i] = h;
    }
  }
  return tr->analysis(v);
}

SystemPtr build_system(const RunConfig& cfg) {
  SystemPtr base;
  try {
    const std::string fam = cfg.family();
    if (fam == "circle") {
      base = std::make_shared<circle::CircleSystem>(circle_config(cfg));
    } else if (fam == "qg") {
      base = std::make_shared<sphere::QGSystem>(qg_config(cfg));
    } else {
      base = std::make_shared<torus::ICSystem>(ic_config(cfg));
    }
  } catch (const ContractViolation& e) {
    data_error(cfg, std::string("invalid system parameters: ") + e.what());
  }
  return cfg.extended() ? extend_central(base) : base;
}

Vec initial_state(const RunConfig& cfg, const FlowSystem& sys) {
  const std::string& preset = cfg.string("initial", "preset");
  if (preset == "file") {
    const Snapshot s = load(cfg, "initial", "file");
    expect_layout(cfg, s, layout_descriptor(cfg.system()), truncation_name(cfg).c_str(), truncation(cfg), sys.dim(),
                  "initial.file");
    return s.data;
  }
  Vec u;
  const std::string fam = cfg.family();
  if (fam == "circle") u = circle_initial(cfg, circle_config(cfg));
  else if (fam == "qg") u = qg_initial(cfg, qg_config(cfg));
  else u = ic_initial(cfg, static_cast<int>(cfg.integer("discretization", "K")));
  if (cfg.extended()) u.push_back(cfg.number("system", "a"));
  return u;
}

Snapshot make_snapshot(const RunConfig& cfg, const FlowSystem& sys, ConstView u, double t) {
  Snapshot s;
  s.system = cfg.system();
  s.layout = layout_descriptor(cfg.system());
  s.truncation_name = truncation_name(cfg);
  s.truncation = truncation(cfg);
  s.time = t;
  const std::string fam = cfg.family();
  s.quantity = fam == "qg" ? "stream function psi" : "velocity";
  s.parameters["a"] = cfg.number("system", "a");
  if (fam == "circle") {
    s.parameters["alpha"] = cfg.number("system", "alpha");
    s.parameters["beta"] = cfg.number("system", "beta");
    s.parameters["period"] = cfg.number("system", "period");
  } else if (fam == "qg") {
    s.parameters["gamma"] = cfg.number("system", "gamma");
    s.parameters["Ro"] = cfg.number("system", "Ro");
  }
  s.parameters["energy"] = energy(sys, u);
  s.data.assign(u.begin(), u.end());
  return s;
}

}  // namespace mea::app
