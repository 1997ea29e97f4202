#include "mea/core/integrators.hpp"

#include <cmath>

#include "mea/core/vec_ops.hpp"
#include "mea/errors.hpp"

namespace mea {

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "if_rk4"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "if_rk4") return Scheme::if_rk4;
  throw UnsupportedScheme("unknown integration scheme '" + s + "'");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw ContractViolation("t_end must be non-negative");
  if (t_end > 0.0 && dt > t_end) throw ContractViolation("dt must not exceed t_end");
  if (monitor_stride < 1) throw ContractViolation("monitor_stride must be >= 1");
}

double DiagnosticsRecord::get(const std::string& key) const {
  if (key == "t") return t;
  if (key == "energy") return energy;
  for (const auto& [k, v] : extra)
    if (k == key) return v;
  throw ContractViolation("diagnostics record has no field '" + key + "'");
}

Vec rhs_eulerian(const FlowSystem& sys, ConstView u) {
  if (u.size() != sys.dim())
    throw ContractViolation("rhs_eulerian: state has " + std::to_string(u.size()) +
                            " coordinates, system " + sys.name() + " expects " +
                            std::to_string(sys.dim()));
  Vec out = sys.adT_self(u);
  for (double& x : out) x = -x;
  const double a = sys.strength();
  if (a != 0.0) {
    const Vec y = sys.lorentz(u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= a * y[i];
  }
  return out;
}

Vec rhs_momentum(const FlowSystem& sys, ConstView m) {
  const Vec u = sys.solve_inertia(m);
  return sys.apply_inertia(rhs_eulerian(sys, u));
}

double energy(const FlowSystem& sys, ConstView u) { return 0.5 * sys.inner_product(u, u); }

DiagnosticsRecord diagnose(const FlowSystem& sys, ConstView u, double t) {
  DiagnosticsRecord r;
  r.t = t;
  r.energy = energy(sys, u);
  r.extra = sys.extras(u);
  return r;
}

namespace {

void check_stage(const char* stage, ConstView stage_value, ConstView u) {
  if (!vec::all_finite(stage_value))
    throw DivergenceError(stage, 0.0, Vec(u.begin(), u.end()));
}

template <typename Rhs>
Vec rk4_generic(Rhs&& f, ConstView u, double dt) {
  const Vec k1 = f(u);
  check_stage("k1", k1, u);
  const Vec k2 = f(vec::axpy(u, 0.5 * dt, k1));
  check_stage("k2", k2, u);
  const Vec k3 = f(vec::axpy(u, 0.5 * dt, k2));
  check_stage("k3", k3, u);
  const Vec k4 = f(vec::axpy(u, dt, k3));
  check_stage("k4", k4, u);
  Vec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  check_stage("update", out, u);
  return out;
}

}  // namespace

Vec rk4_step(const FlowSystem& sys, ConstView u, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("rk4_step: dt must be positive");
  return rk4_generic([&](ConstView v) { return rhs_eulerian(sys, v); }, u, dt);
}

Vec rk4_step_momentum(const FlowSystem& sys, ConstView m, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("rk4_step_momentum: dt must be positive");
  return rk4_generic([&](ConstView v) { return rhs_momentum(sys, v); }, m, dt);
}

Vec if_rk4_step(const FlowSystem& sys, ConstView u, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("if_rk4_step: dt must be positive");
  const auto symbol = sys.linear_symbol();
  if (!symbol)
    throw UnsupportedScheme("if_rk4 requires a linear symbol; system " + sys.name() +
                            " has none");
  if (u.size() != sys.dim())
    throw ContractViolation("if_rk4_step: state dimension mismatch for " + sys.name());

  auto nonlinear = [&](ConstView v) {
    Vec r = sys.adT_self(v);
    for (double& x : r) x = -x;
    return r;
  };
  const double h = 0.5 * dt;

  const Vec k1 = nonlinear(u);
  check_stage("k1", k1, u);
  const Vec u1 = symbol->propagate(vec::axpy(u, h, k1), h);
  const Vec k2 = nonlinear(u1);
  check_stage("k2", k2, u);
  const Vec eh_u = symbol->propagate(u, h);
  const Vec k3 = nonlinear(vec::axpy(eh_u, h, k2));
  check_stage("k3", k3, u);
  const Vec e_u = symbol->propagate(u, dt);
  const Vec eh_k3 = symbol->propagate(k3, h);
  const Vec k4 = nonlinear(vec::axpy(e_u, dt, eh_k3));
  check_stage("k4", k4, u);

  const Vec e_k1 = symbol->propagate(k1, dt);
  Vec mid(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mid[i] = k2[i] + k3[i];
  const Vec eh_mid = symbol->propagate(mid, h);
  Vec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = e_u[i] + dt / 6.0 * (e_k1[i] + 2.0 * eh_mid[i] + k4[i]);
  check_stage("update", out, u);
  return out;
}

Vec step(const FlowSystem& sys, ConstView u, double dt, Scheme scheme) {
  return scheme == Scheme::rk4 ? rk4_step(sys, u, dt) : if_rk4_step(sys, u, dt);
}

void integrate(const FlowSystem& sys, ConstView u0, const IntegratorConfig& cfg,
               const StepObserver& observer) {
  cfg.validate();
  if (u0.size() != sys.dim())
    throw ContractViolation("evolve: initial state dimension mismatch for " + sys.name());
  if (cfg.scheme == Scheme::if_rk4 && !sys.linear_symbol())
    throw UnsupportedScheme("if_rk4 requires a linear symbol; system " + sys.name() +
                            " has none");

  Vec u(u0.begin(), u0.end());
  observer(0.0, u, true);
  if (cfg.t_end == 0.0) return;

  // Number of steps such that the last one is at most dt long.
  const double ratio = cfg.t_end / cfg.dt;
  long n_steps = static_cast<long>(std::ceil(ratio - 1e-9));
  if (n_steps < 1) n_steps = 1;

  double t = 0.0;
  for (long k = 1; k <= n_steps; ++k) {
    const bool last = (k == n_steps);
    const double t_next = last ? cfg.t_end : static_cast<double>(k) * cfg.dt;
    const double h = t_next - t;
    try {
      u = step(sys, u, h, cfg.scheme);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.stage(), t, e.last_state());
    }
    t = t_next;
    observer(t, u, last || k % cfg.monitor_stride == 0);
  }
}

Trajectory evolve(const FlowSystem& sys, ConstView u0, const IntegratorConfig& cfg) {
  Trajectory traj;
  integrate(sys, u0, cfg, [&](double t, ConstView u, bool record) {
    if (!record) return;
    traj.times.push_back(t);
    traj.states.emplace_back(u.begin(), u.end());
    traj.records.push_back(diagnose(sys, u, t));
  });
  return traj;
}

}  // namespace mea
