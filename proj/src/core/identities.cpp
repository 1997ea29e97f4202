#include "mea/core/identities.hpp"

#include <algorithm>
#include <cmath>

#include "mea/core/integrators.hpp"

namespace mea {

namespace {

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

PairingResidual pairing_identity_residual(const FlowSystem& sys, ConstView u, ConstView w) {
  const double nu = sys.norm(u);
  const double nw = sys.norm(w);
  const double scale = nu * nu * nw;
  if (scale == 0.0) return {0.0, -1};

  const double lhs = sys.pairing(sys.apply_inertia(rhs_eulerian(sys, u)), w);
  const double rhs = sys.inner_product(u, sys.bracket(u, w)) + sys.strength() * sys.cocycle(u, w);
  const double r_minus = std::abs(lhs + rhs);
  const double r_plus = std::abs(lhs - rhs);
  if (r_minus <= r_plus) return {r_minus / scale, -1};
  return {r_plus / scale, +1};
}

double adjoint_identity_residual(const FlowSystem& sys, ConstView u, ConstView w) {
  const double nu = sys.norm(u);
  const double nw = sys.norm(w);
  const double lhs = sys.inner_product(sys.adT_self(u), w);
  const double rhs = sys.inner_product(u, sys.bracket(u, w));
  return safe_div(std::abs(lhs - rhs), nu * nu * nw);
}

double cocycle_cyclic_residual(const FlowSystem& sys, ConstView u, ConstView v, ConstView w) {
  const double sum = sys.cocycle(sys.bracket(u, v), w) + sys.cocycle(sys.bracket(v, w), u) +
                     sys.cocycle(sys.bracket(w, u), v);
  return safe_div(std::abs(sum), sys.norm(u) * sys.norm(v) * sys.norm(w));
}

double cocycle_antisymmetry_residual(const FlowSystem& sys, ConstView u, ConstView v) {
  return safe_div(std::abs(sys.cocycle(u, v) + sys.cocycle(v, u)), sys.norm(u) * sys.norm(v));
}

double lorentz_skewness_residual(const FlowSystem& sys, ConstView u) {
  const double n = sys.norm(u);
  return safe_div(std::abs(sys.inner_product(sys.lorentz(u), u)), n * n);
}

double lorentz_skew_adjoint_residual(const FlowSystem& sys, ConstView u, ConstView v) {
  const double s = sys.inner_product(sys.lorentz(u), v) + sys.inner_product(u, sys.lorentz(v));
  return safe_div(std::abs(s), sys.norm(u) * sys.norm(v));
}

double sup_norm(ConstView a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double relative_sup_difference(ConstView a, ConstView b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m / std::max(1.0, sup_norm(a));
}

}  // namespace mea
