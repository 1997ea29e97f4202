#include "mea/torus/ic.hpp"

#include <cmath>

#include "mea/errors.hpp"

namespace mea::torus {

void ICConfig::validate() const {
  if (K < 1) throw ContractViolation("torus truncation K must be positive");
  if (!std::isfinite(a)) throw ContractViolation("strength a must be finite");
  for (double b : B)
    if (!std::isfinite(b)) throw ContractViolation("B must be finite");
  if (B_field) {
    if (B_field->K != K) throw ContractViolation("B field truncation must equal K");
    if (divergence_max(*B_field) > 1e-12 * std::max(1.0, B_field->coeff_norm()))
      throw ContractViolation("B field must be divergence-free");
  }
}

void require_divergence_free(const Fourier3DVectorField& u, const char* what, double tol) {
  if (divergence_max(u) > tol * (1.0 + u.coeff_norm()))
    throw ContractViolation(std::string(what) + ": input is not divergence-free");
}

Fourier3DVectorField nonlinear_rotational(const Fourier3DVectorField& u, bool dealias) {
  require_divergence_free(u, "nonlinear_rotational");
  const int n = product_grid_size(u.K, dealias);
  const GridVectorField w = synthesize(curl(u), n);
  const GridVectorField ug = synthesize(u, n);
  return leray_project(analyze(cross(w, ug), u.K));
}

namespace {

// (a.grad) b on the grid, with the gradient of b taken spectrally.
GridVectorField advect(const GridVectorField& a, const Fourier3DVectorField& b, int n) {
  GridVectorField out;
  out.n = n;
  const std::size_t N = a.v[0].size();
  for (auto& comp : out.v) comp.assign(N, 0.0);
  for (int d = 0; d < 3; ++d) {
    const GridVectorField grad = synthesize(gradient(Fourier3DScalarField{b.K, b.c[d]}), n);
    for (std::size_t i = 0; i < N; ++i)
      out.v[d][i] = a.v[0][i] * grad.v[0][i] + a.v[1][i] * grad.v[1][i] + a.v[2][i] * grad.v[2][i];
  }
  return out;
}

}  // namespace

Fourier3DVectorField nonlinear_convective(const Fourier3DVectorField& u, bool dealias) {
  const int n = product_grid_size(u.K, dealias);
  return leray_project(analyze(advect(synthesize(u, n), u, n), u.K));
}

Fourier3DVectorField lorentz_ic(const Fourier3DVectorField& u, const ICConfig& cfg) {
  if (cfg.B_field) {
    const int n = product_grid_size(u.K, cfg.dealias);
    return leray_project(analyze(cross(synthesize(*cfg.B_field, n), synthesize(u, n)), u.K));
  }
  const auto& B = cfg.B;
  Fourier3DVectorField out = Fourier3DVectorField::zeros(u.K);
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.c[0][i] = B[1] * u.c[2][i] - B[2] * u.c[1][i];
    out.c[1][i] = B[2] * u.c[0][i] - B[0] * u.c[2][i];
    out.c[2][i] = B[0] * u.c[1][i] - B[1] * u.c[0][i];
  }
  return leray_project(out);
}

double lichnerowicz(const Fourier3DVectorField& u, const Fourier3DVectorField& v, const ICConfig& cfg) {
  // P is self-adjoint and v divergence-free, so pairing with P(B x u) is exact.
  return l2_inner3d(lorentz_ic(u, cfg), v);
}

Fourier3DVectorField ic_bracket(const Fourier3DVectorField& u, const Fourier3DVectorField& w, bool dealias) {
  const int n = product_grid_size(u.K, dealias);
  const GridVectorField ug = synthesize(u, n);
  const GridVectorField wg = synthesize(w, n);
  GridVectorField d = advect(wg, u, n);
  const GridVectorField e = advect(ug, w, n);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < d.v[c].size(); ++i) d.v[c][i] -= e.v[c][i];
  return leray_project(analyze(d, u.K));
}

Fourier3DVectorField euler_rhs(const Fourier3DVectorField& u, bool dealias) {
  return -1.0 * nonlinear_rotational(u, dealias);
}

Fourier3DVectorField ic_rhs(const Fourier3DVectorField& u, const ICConfig& cfg) {
  Fourier3DVectorField out = euler_rhs(u, cfg.dealias);
  if (cfg.a != 0.0) out -= cfg.a * lorentz_ic(u, cfg);
  return out;
}

ICSystem::ICSystem(ICConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Fourier3DVectorField ICSystem::field(ConstView u) const {
  require_dim(u, "ic state");
  return Fourier3DVectorField::from_real(u, cfg_.K);
}

double ICSystem::inner_product(ConstView u, ConstView v) const { return l2_inner3d(field(u), field(v)); }

double ICSystem::pairing(ConstView m, ConstView v) const { return l2_inner3d(field(m), field(v)); }

Vec ICSystem::apply_inertia(ConstView u) const {
  require_dim(u, "apply_inertia");
  return Vec(u.begin(), u.end());
}

Vec ICSystem::solve_inertia(ConstView m) const {
  require_dim(m, "solve_inertia");
  return Vec(m.begin(), m.end());
}

Vec ICSystem::adT_self(ConstView u) const { return nonlinear_rotational(field(u), cfg_.dealias).to_real(); }

Vec ICSystem::lorentz(ConstView u) const { return lorentz_ic(field(u), cfg_).to_real(); }

double ICSystem::cocycle(ConstView u, ConstView v) const { return lichnerowicz(field(u), field(v), cfg_); }

Vec ICSystem::bracket(ConstView u, ConstView v) const {
  return ic_bracket(field(u), field(v), cfg_.dealias).to_real();
}

std::vector<std::pair<std::string, double>> ICSystem::extras(ConstView u) const {
  return {{"divergence", divergence_max(field(u))}};
}

}  // namespace mea::torus
