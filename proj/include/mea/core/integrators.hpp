#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mea/core/flow_system.hpp"

namespace mea {

enum class Scheme { rk4, if_rk4 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::rk4;
  int monitor_stride = 1;

  /// Throws ContractViolation when dt/t_end/stride are inconsistent.
  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  std::vector<std::pair<std::string, double>> extra;

  double get(const std::string& key) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<DiagnosticsRecord> records;
};

/// u' = -adT_self(u) - a * lorentz(u)
Vec rhs_eulerian(const FlowSystem& sys, ConstView u);

/// m' = A(rhs_eulerian(A^{-1} m)); the momentum form by conjugation.
Vec rhs_momentum(const FlowSystem& sys, ConstView m);

double energy(const FlowSystem& sys, ConstView u);

DiagnosticsRecord diagnose(const FlowSystem& sys, ConstView u, double t);

Vec rk4_step(const FlowSystem& sys, ConstView u, double dt);

/// Lawson (integrating-factor) RK4: exact on the diagonal linear part.
Vec if_rk4_step(const FlowSystem& sys, ConstView u, double dt);

/// One step of either scheme.
Vec step(const FlowSystem& sys, ConstView u, double dt, Scheme scheme);

/// Same RK4 tableau applied to the momentum form m' = rhs_momentum(m).
Vec rk4_step_momentum(const FlowSystem& sys, ConstView m, double dt);

/// Receives (t, state, is_record) for t = 0 and after every step.
using StepObserver = std::function<void(double, ConstView, bool)>;

/// Time loop shared by evolve and the streaming front ends: the final step
/// is shortened to land exactly on t_end. DivergenceError carries the last
/// finite time.
void integrate(const FlowSystem& sys, ConstView u0, const IntegratorConfig& cfg,
               const StepObserver& observer);

/// Integrates from t=0 to cfg.t_end, shortening the final step so the last
/// record lands exactly on t_end. States are kept at record times only.
Trajectory evolve(const FlowSystem& sys, ConstView u0, const IntegratorConfig& cfg);

}  // namespace mea
