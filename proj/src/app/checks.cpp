#include "mea/app/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "mea/app/random_fields.hpp"
#include "mea/circle/circle_system.hpp"
#include "mea/core/extension.hpp"
#include "mea/core/identities.hpp"
#include "mea/core/integrators.hpp"
#include "mea/core/vec_ops.hpp"
#include "mea/sphere/qg.hpp"
#include "mea/torus/ic.hpp"

namespace mea::app {

namespace {

// Same system with the bracket replaced by its negative.
class FlippedBracket final : public FlowSystem {
 public:
  explicit FlippedBracket(SystemPtr base) : base_(std::move(base)) {}
  std::string name() const override { return base_->name(); }
  std::size_t dim() const override { return base_->dim(); }
  double strength() const override { return base_->strength(); }
  double inner_product(ConstView u, ConstView v) const override { return base_->inner_product(u, v); }
  double pairing(ConstView m, ConstView v) const override { return base_->pairing(m, v); }
  Vec apply_inertia(ConstView u) const override { return base_->apply_inertia(u); }
  Vec solve_inertia(ConstView m) const override { return base_->solve_inertia(m); }
  Vec adT_self(ConstView u) const override { return base_->adT_self(u); }
  Vec lorentz(ConstView u) const override { return base_->lorentz(u); }
  double cocycle(ConstView u, ConstView v) const override { return base_->cocycle(u, v); }
  Vec bracket(ConstView u, ConstView v) const override {
    Vec b = base_->bracket(u, v);
    for (double& x : b) x = -x;
    return b;
  }
  std::optional<LinearSymbol> linear_symbol() const override { return base_->linear_symbol(); }

 private:
  SystemPtr base_;
};

// A system under test plus a sampler of band-limited states and a stable
// RK4 step for short trajectories.
struct Trial {
  std::string label;
  SystemPtr sys;
  std::function<Vec(Rng&)> sample;
  double dt = 1e-3;
};

Rng group_rng(const CheckOptions& opt, std::uint64_t group) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(group)};
  return Rng(seq);
}

SystemPtr maybe_flip(const CheckOptions& opt, SystemPtr s) {
  return opt.flip_bracket ? std::make_shared<FlippedBracket>(std::move(s)) : s;
}

circle::CircleSystemConfig circle_cfg(const std::string& preset, double a, int K) {
  return circle::CircleSystemConfig::preset(preset, a, K);
}

Trial circle_trial(const CheckOptions& opt, const std::string& label, double alpha, double beta, double a) {
  circle::CircleSystemConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.a = a;
  c.K = opt.circle_K;
  const int K = opt.circle_K, band = std::min(opt.circle_band, opt.circle_K);
  const double L = c.L;
  // RK4 stability: |a| kappa^3 / (alpha + beta kappa^2) dt well inside 2.8.
  const double kmax = K;
  const double stiff = std::abs(a) * kmax * kmax * kmax / (alpha + beta * kmax * kmax) + kmax;
  return {label, maybe_flip(opt, std::make_shared<circle::CircleSystem>(c)),
          [K, band, L](Rng& rng) { return random_circle(K, band, rng, L).to_real(); },
          std::min(1e-3, 1.0 / stiff)};
}

std::vector<Trial> circle_presets(const CheckOptions& opt) {
  const double a = opt.strength;
  return {circle_trial(opt, "burgers", 1, 0, 0), circle_trial(opt, "kdv", 1, 0, a),
          circle_trial(opt, "ch", 1, 1, 0), circle_trial(opt, "gch", 1, 1, a)};
}

sphere::QGConfig qg_cfg(const CheckOptions& opt, double gamma, bool topography) {
  sphere::QGConfig q;
  q.gamma = gamma;
  q.Ro = 0.8;
  q.a = opt.strength;
  q.lmax = opt.sphere_lmax;
  if (topography) {
    Rng rng = group_rng(opt, 1000);
    q.h = 0.2 * random_sphere(q.lmax, std::max(1, q.lmax / 4), rng);
  }
  return q;
}

Trial qg_trial(const CheckOptions& opt, double gamma, bool topography) {
  const sphere::QGConfig q = qg_cfg(opt, gamma, topography);
  const int L = q.lmax, band = std::max(1, q.lmax / 2);
  char label[64];
  std::snprintf(label, sizeof label, "qg(gamma=%g%s)", gamma, topography ? ",h" : "");
  return {label, maybe_flip(opt, std::make_shared<sphere::QGSystem>(q)),
          [L, band](Rng& rng) { return random_sphere(L, band, rng, false).coeffs; }, 2e-3};
}

torus::ICConfig ic_cfg(const CheckOptions& opt, bool field) {
  torus::ICConfig c;
  c.B = {0.3, -0.5, 1.0};
  c.a = opt.strength;
  c.K = opt.torus_K;
  if (field) {
    Rng rng = group_rng(opt, 2000);
    c.B_field = random_torus(c.K, std::max(1, c.K / 2), rng);
  }
  return c;
}

Trial ic_trial(const CheckOptions& opt, bool field) {
  const torus::ICConfig c = ic_cfg(opt, field);
  const int K = c.K, band = std::max(1, c.K / 2);
  return {field ? "ic(B field)" : "ic(constant B)", maybe_flip(opt, std::make_shared<torus::ICSystem>(c)),
          [K, band](Rng& rng) { return random_torus(K, band, rng).to_real(); }, 5e-3};
}

std::vector<Trial> all_trials(const CheckOptions& opt) {
  std::vector<Trial> t = circle_presets(opt);
  t.push_back(qg_trial(opt, 0.0, false));
  t.push_back(qg_trial(opt, 1.5, true));
  t.push_back(ic_trial(opt, false));
  t.push_back(ic_trial(opt, true));
  return t;
}

CheckResult result(std::string name, double residual, double tol, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.passed = std::isfinite(residual) && residual < tol;
  r.detail = std::move(detail);
  return r;
}

// Max over samples of f(rng); NaN propagates as a failure.
double worst(int samples, Rng& rng, const std::function<double(Rng&)>& f) {
  double w = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = f(rng);
    if (!std::isfinite(r)) return std::numeric_limits<double>::quiet_NaN();
    w = std::max(w, r);
  }
  return w;
}

// Trajectory of `sys` from u0 with `steps` RK4 steps; states after each step.
std::vector<Vec> rk4_path(const FlowSystem& sys, Vec u, double dt, int steps) {
  std::vector<Vec> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    u = rk4_step(sys, u, dt);
    out.push_back(u);
  }
  return out;
}

}  // namespace

std::vector<CheckResult> adjoint_identity_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  std::vector<Trial> trials = {circle_trial(opt, "circle(alpha=1,beta=0)", 1, 0, opt.strength),
                               circle_trial(opt, "circle(alpha=1,beta=1)", 1, 1, opt.strength),
                               circle_trial(opt, "circle(alpha=2,beta=0.5)", 2, 0.5, opt.strength),
                               qg_trial(opt, 0.0, false), qg_trial(opt, 1.5, true), ic_trial(opt, false)};
  Rng rng = group_rng(opt, 1);
  for (const auto& t : trials) {
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g), w = t.sample(g);
      return adjoint_identity_residual(*t.sys, u, w);
    });
    out.push_back(result("adjoint-identity " + t.label, r, 1e-10));
  }
  return out;
}

std::vector<CheckResult> pairing_identity_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 2);
  for (const auto& t : all_trials(opt)) {
    double r = 0.0;
    int sign = -1;
    bool consistent = true;
    for (int i = 0; i < opt.samples; ++i) {
      const Vec u = t.sample(rng), w = t.sample(rng);
      const PairingResidual p = pairing_identity_residual(*t.sys, u, w);
      r = std::isfinite(p.residual) ? std::max(r, p.residual) : p.residual;
      if (i == 0) sign = p.sign;
      consistent = consistent && p.sign == sign;
    }
    CheckResult c = result("pairing-identity " + t.label, r, 1e-10,
                           "sign=" + std::string(sign < 0 ? "-1" : "+1") + (consistent ? "" : " (inconsistent)"));
    if (sign != -1 || !consistent) {
      c.passed = false;
      c.detail += " expected constant sign -1";
    }
    out.push_back(c);
  }
  return out;
}

std::vector<CheckResult> cocycle_checks(const CheckOptions& opt) {
  struct Named {
    std::string cocycle;
    Trial t;
  };
  std::vector<Named> trials = {{"gelfand-fuchs", circle_trial(opt, "kdv", 1, 0, opt.strength)},
                               {"quantomorphism", qg_trial(opt, 0.0, false)},
                               {"quantomorphism", qg_trial(opt, 1.5, true)},
                               {"lichnerowicz", ic_trial(opt, false)},
                               {"lichnerowicz", ic_trial(opt, true)}};
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 3);
  for (const auto& [cocycle, t] : trials) {
    const std::string tag = cocycle + " " + t.label;
    const double anti = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g), v = t.sample(g);
      return cocycle_antisymmetry_residual(*t.sys, u, v);
    });
    out.push_back(result("cocycle-antisymmetry " + tag, anti, 1e-11));
    const double cyc = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g), v = t.sample(g), w = t.sample(g);
      return cocycle_cyclic_residual(*t.sys, u, v, w);
    });
    out.push_back(result("cocycle-cyclic " + tag, cyc, 1e-11));
  }
  return out;
}

std::vector<CheckResult> lorentz_skewness_checks(const CheckOptions& opt) {
  std::vector<Trial> trials = {circle_trial(opt, "kdv", 1, 0, opt.strength),
                               circle_trial(opt, "gch", 1, 1, opt.strength), qg_trial(opt, 0.0, false),
                               qg_trial(opt, 1.5, true), ic_trial(opt, false), ic_trial(opt, true)};
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 4);
  for (const auto& t : trials) {
    const double self = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g);
      return lorentz_skewness_residual(*t.sys, u);
    });
    out.push_back(result("lorentz-skewness " + t.label, self, 1e-12));
    const double pair = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g), v = t.sample(g);
      return lorentz_skew_adjoint_residual(*t.sys, u, v);
    });
    out.push_back(result("lorentz-skew-adjoint " + t.label, pair, 1e-12));
  }
  return out;
}

std::vector<CheckResult> deformation_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 5);
  const double a = opt.strength;
  const int K = opt.circle_K;

  // Residual of (rhs_magnetic - rhs_geodesic) + a Y against the size of a Y.
  auto measure = [](const Vec& mag, const Vec& geo, const Vec& aY) {
    Vec d(mag.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (mag[i] - geo[i]) + aY[i];
    const double scale = sup_norm(aY) > 0.0 ? sup_norm(aY) : std::max(1.0, sup_norm(geo));
    return sup_norm(d) / scale;
  };

  for (const auto& [mag_name, geo_name] : {std::pair{"kdv", "burgers"}, std::pair{"gch", "ch"}}) {
    const auto mag = circle_cfg(mag_name, a, K);
    const auto geo = circle_cfg(geo_name, 0.0, K);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      const auto u = random_circle(K, std::min(opt.circle_band, K), g, mag.L);
      const Vec aY = (a * circle::lorentz_gf(u, mag)).to_real();
      return measure(circle::circle_rhs(u, mag).to_real(), circle::circle_rhs(u, geo).to_real(), aY);
    });
    out.push_back(result(std::string("deformation ") + mag_name + "-" + geo_name, r, 1e-13));
  }
  {
    const auto cfg = ic_cfg(opt, false);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      const auto u = random_torus(cfg.K, std::max(1, cfg.K / 2), g);
      const Vec aY = (a * torus::lorentz_ic(u, cfg)).to_real();
      return measure(torus::ic_rhs(u, cfg).to_real(), torus::euler_rhs(u, cfg.dealias).to_real(), aY);
    });
    out.push_back(result("deformation ic-euler", r, 1e-13));
  }
  {
    const sphere::QGConfig q = qg_cfg(opt, 1.5, true);
    sphere::QGConfig q0 = q;
    q0.a = 0.0;
    const sphere::QGSystem mag(q), geo(q0);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      const Vec f = random_sphere(q.lmax, std::max(1, q.lmax / 2), g, false).coeffs;
      Vec aY = mag.lorentz(f);
      for (double& x : aY) x *= a;
      return measure(rhs_eulerian(mag, f), rhs_eulerian(geo, f), aY);
    });
    out.push_back(result("deformation qg-qg(a=0)", r, 1e-13));
  }
  return out;
}

std::vector<CheckResult> extension_checks(const CheckOptions& opt) {
  std::vector<Trial> trials = {circle_trial(opt, "kdv", 1, 0, opt.strength),
                               circle_trial(opt, "gch", 1, 1, opt.strength), qg_trial(opt, 1.5, true),
                               ic_trial(opt, false)};
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 6);
  for (const auto& t : trials) {
    const SystemPtr ext = extend_central(t.sys);
    const Vec u0 = t.sample(rng);
    const auto mag = rk4_path(*t.sys, u0, t.dt, opt.extension_steps);
    const auto ex = rk4_path(*ext, ExtendedState{u0, opt.strength}.pack(), t.dt, opt.extension_steps);
    double diff = 0.0;
    bool charge_constant = true;
    for (std::size_t i = 0; i < mag.size(); ++i) {
      const ExtendedState s = ExtendedState::unpack(ex[i]);
      diff = std::max(diff, relative_sup_difference(mag[i], s.u));
      if (!std::isfinite(diff)) break;
      charge_constant = charge_constant && s.a == opt.strength;
    }
    // The extended ad^T must match the extended bracket ([u,v], sigma(u,v))
    // under the metric <u,v> + ab, independently of how the rhs is assembled.
    const double adj = worst(opt.samples, rng, [&](Rng& g) {
      std::normal_distribution<double> n(0.0, 1.0);
      const Vec x = ExtendedState{t.sample(g), n(g)}.pack();
      const Vec y = ExtendedState{t.sample(g), n(g)}.pack();
      return adjoint_identity_residual(*ext, x, y);
    });
    out.push_back(result("adjoint-identity extended:" + t.label, adj, 1e-10));
    CheckResult c = result("extension-equivalence " + t.label, diff, 1e-12,
                           std::to_string(opt.extension_steps) + " steps, charge " +
                               (charge_constant ? "bit-constant" : "CHANGED"));
    c.passed = c.passed && charge_constant;
    out.push_back(c);
  }
  return out;
}

std::vector<CheckResult> strength_scaling_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 7);
  const int steps = opt.scaling_steps;
  for (double a : {-2.0, 0.5, 3.0}) {
    CheckOptions o = opt;
    o.strength = a;
    CheckOptions unit = opt;
    unit.strength = 1.0;
    std::vector<std::pair<Trial, Trial>> pairs = {
        {circle_trial(o, "gch", 1, 1, a), circle_trial(unit, "gch", 1, 1, 1.0)},
        {qg_trial(o, 1.5, true), qg_trial(unit, 1.5, true)},
        {ic_trial(o, false), ic_trial(unit, false)}};
    for (const auto& [scaled, unit_trial] : pairs) {
      const ScaledFieldSystem field_scaled(unit_trial.sys, a);
      const Vec u0 = scaled.sample(rng);
      const double dt = std::min(scaled.dt, unit_trial.dt);
      const auto p1 = rk4_path(*scaled.sys, u0, dt, steps);
      const auto p2 = rk4_path(field_scaled, u0, dt, steps);
      double diff = 0.0;
      for (std::size_t i = 0; i < p1.size(); ++i) diff = std::max(diff, relative_sup_difference(p1[i], p2[i]));
      char name[96];
      std::snprintf(name, sizeof name, "strength-scaling %s a=%g", scaled.label.c_str(), a);
      out.push_back(result(name, diff, 1e-14));
    }
  }
  return out;
}

std::vector<CheckResult> steady_state_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 8);
  for (const auto& t : circle_presets(opt)) {
    Vec u(t.sys->dim(), 0.0);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      u[0] = std::normal_distribution<double>(0.0, 1.0)(g);
      return t.sys->norm(rhs_eulerian(*t.sys, u)) / std::max(1.0, t.sys->norm(u));
    });
    out.push_back(result("steady-state constant " + t.label, r, 1e-12));
  }
  for (double gamma : {0.0, 1.5}) {
    sphere::QGConfig q = qg_cfg(opt, gamma, false);
    sphere::SphereField h = sphere::SphereField::zeros(q.lmax);
    for (int l = 1; l <= std::min(4, q.lmax); ++l) h.set(l, 0, 0.1 / l);
    q.h = h;
    const sphere::QGSystem sys(q);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      sphere::SphereField f = sphere::SphereField::zeros(q.lmax);
      std::normal_distribution<double> n(0.0, 1.0);
      for (int l = 1; l <= q.lmax; ++l) f.set(l, 0, n(g) / (1.0 + l * l));
      return sys.norm(rhs_eulerian(sys, f.coeffs)) / std::max(1.0, sys.norm(f.coeffs));
    });
    char name[64];
    std::snprintf(name, sizeof name, "steady-state zonal qg(gamma=%g,zonal h)", gamma);
    out.push_back(result(name, r, 1e-12));
  }
  {
    torus::ICConfig c = ic_cfg(opt, false);
    c.a = 0.0;
    const torus::ICSystem sys(c);
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      torus::Fourier3DVectorField u = torus::Fourier3DVectorField::zeros(c.K);
      std::normal_distribution<double> n(0.0, 1.0);
      for (int kz = 1; kz <= c.K; ++kz)
        for (int d = 0; d < 2; ++d) u.at(d, 0, 0, kz) = torus::cplx(n(g), n(g)) / (1.0 + kz * kz);
      const Vec v = u.to_real();
      return sys.norm(rhs_eulerian(sys, v)) / std::max(1.0, sys.norm(v));
    });
    out.push_back(result("steady-state shear euler(a=0)", r, 1e-12));
  }
  return out;
}

std::vector<CheckResult> momentum_velocity_checks(const CheckOptions& opt) {
  std::vector<Trial> trials = {circle_trial(opt, "kdv", 1, 0, opt.strength),
                               circle_trial(opt, "gch", 1, 1, opt.strength),
                               circle_trial(opt, "circle(alpha=2,beta=0.5)", 2, 0.5, opt.strength),
                               qg_trial(opt, 1.5, true), ic_trial(opt, true)};
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 9);
  const int steps = opt.momentum_steps;
  for (const auto& t : trials) {
    Vec u = t.sample(rng);
    Vec m = t.sys->apply_inertia(u);
    double diff = 0.0;
    for (int i = 0; i < steps && std::isfinite(diff); ++i) {
      u = rk4_step(*t.sys, u, t.dt);
      m = rk4_step_momentum(*t.sys, m, t.dt);
      const Vec Au = t.sys->apply_inertia(u);
      diff = std::max(diff, relative_sup_difference(m, Au));
    }
    out.push_back(result("momentum-velocity " + t.label, diff, 1e-12, std::to_string(steps) + " steps"));
  }
  return out;
}

std::vector<CheckResult> inertia_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = group_rng(opt, 10);
  for (const auto& t : all_trials(opt)) {
    const double r = worst(opt.samples, rng, [&](Rng& g) {
      const Vec u = t.sample(g);
      const Vec back = t.sys->solve_inertia(t.sys->apply_inertia(u));
      return t.sys->norm(vec::sub(back, u)) / t.sys->norm(u);
    });
    out.push_back(result("inertia-roundtrip " + t.label, r, 1e-12));
  }
  return out;
}

std::vector<CheckResult> run_check_suite(const CheckOptions& opt) {
  std::vector<CheckResult> all;
  for (auto* group : {adjoint_identity_checks, pairing_identity_checks, cocycle_checks, lorentz_skewness_checks,
                      deformation_checks, extension_checks, strength_scaling_checks, steady_state_checks,
                      momentum_velocity_checks, inertia_checks}) {
    auto part = group(opt);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::string format_check(const CheckResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " residual=%.3e tol=%.0e", r.residual, r.tolerance);
  std::string line = std::string(r.passed ? "PASS " : "FAIL ") + r.name + buf;
  if (!r.detail.empty()) line += " " + r.detail;
  return line;
}

}  // namespace mea::app
