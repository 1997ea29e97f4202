#include "mea/circle/circle_system.hpp"

#include <algorithm>
#include <cmath>

#include "mea/errors.hpp"

namespace mea::circle {

using cplx = std::complex<double>;

void CircleSystemConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0))
    throw ContractViolation("alpha and beta must be non-negative");
  if (alpha == 0.0 && beta == 0.0) throw ContractViolation("alpha and beta cannot both vanish");
  if (beta == 0.0 && !(alpha > 0.0)) throw ContractViolation("beta = 0 requires alpha > 0");
  if (K < 1) throw ContractViolation("truncation K must be positive");
  if (!(L > 0.0)) throw ContractViolation("period L must be positive");
  if (!std::isfinite(a)) throw ContractViolation("strength a must be finite");
}

bool is_circle_preset(const std::string& name) {
  return name == "burgers" || name == "kdv" || name == "ch" || name == "gch";
}

CircleSystemConfig CircleSystemConfig::preset(const std::string& name, double a, int K) {
  CircleSystemConfig c;
  c.K = K;
  if (name == "burgers") {
    c.alpha = 1.0, c.beta = 0.0, c.a = 0.0;
  } else if (name == "kdv") {
    c.alpha = 1.0, c.beta = 0.0, c.a = a;
  } else if (name == "ch") {
    c.alpha = 1.0, c.beta = 1.0, c.a = 0.0;
  } else if (name == "gch") {
    c.alpha = 1.0, c.beta = 1.0, c.a = a;
  } else {
    throw ContractViolation("unknown circle preset '" + name + "'");
  }
  return c;
}

double inertia_symbol(const CircleSystemConfig& cfg, int k) {
  const double kappa = 2.0 * std::numbers::pi * k / cfg.L;
  return cfg.alpha + cfg.beta * kappa * kappa;
}

namespace {

void require_matching(const Fourier1DField& u, const CircleSystemConfig& cfg) {
  if (u.K() != cfg.K || u.period != cfg.L)
    throw ContractViolation("field truncation/period does not match the circle system");
}

double max_abs(const Fourier1DField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

Fourier1DField apply_inertia_ab(const Fourier1DField& u, const CircleSystemConfig& cfg) {
  require_matching(u, cfg);
  Fourier1DField out = u;
  for (int k = 0; k <= u.K(); ++k) out.coeffs[k] *= inertia_symbol(cfg, k);
  return out;
}

Fourier1DField solve_inertia_ab(const Fourier1DField& m, const CircleSystemConfig& cfg) {
  require_matching(m, cfg);
  Fourier1DField out = m;
  const double scale = max_abs(m);
  for (int k = 0; k <= m.K(); ++k) {
    const double s = inertia_symbol(cfg, k);
    if (s == 0.0) {
      if (std::abs(m.coeffs[k]) > 1e-13 * scale) throw SingularInertia(k);
      out.coeffs[k] = {};
    } else {
      out.coeffs[k] /= s;
    }
  }
  return out;
}

Fourier1DField adT_self_circle(const Fourier1DField& u, const CircleSystemConfig& cfg) {
  require_matching(u, cfg);
  const int M = product_grid_size(cfg.K, cfg.dealias);
  const std::vector<double> g0 = u.to_grid(M);
  std::vector<double> flux(static_cast<std::size_t>(M));
  if (cfg.beta == 0.0) {
    for (int j = 0; j < M; ++j) flux[j] = 1.5 * cfg.alpha * g0[j] * g0[j];
  } else {
    const std::vector<double> g1 = derivative(u, 1).to_grid(M);
    const std::vector<double> g2 = derivative(u, 2).to_grid(M);
    for (int j = 0; j < M; ++j)
      flux[j] = 1.5 * cfg.alpha * g0[j] * g0[j] - cfg.beta * (g0[j] * g2[j] + 0.5 * g1[j] * g1[j]);
  }
  Fourier1DField out = derivative(Fourier1DField::from_grid(flux, cfg.K, cfg.L), 1);
  return solve_inertia_ab(out, cfg);
}

Fourier1DField lorentz_gf(const Fourier1DField& u, const CircleSystemConfig& cfg) {
  return -1.0 * solve_inertia_ab(derivative(u, 3), cfg);
}

double gelfand_fuchs(const Fourier1DField& u, const Fourier1DField& v) {
  return l2_pairing(u, derivative(v, 3));
}

double h1ab_inner(const Fourier1DField& u, const Fourier1DField& v, const CircleSystemConfig& cfg) {
  require_matching(u, cfg);
  require_matching(v, cfg);
  double s = inertia_symbol(cfg, 0) * u.coeffs[0].real() * v.coeffs[0].real();
  for (int k = 1; k <= u.K(); ++k)
    s += 2.0 * inertia_symbol(cfg, k) * std::real(u.coeffs[k] * std::conj(v.coeffs[k]));
  return cfg.L * s;
}

Fourier1DField circle_bracket(const Fourier1DField& u, const Fourier1DField& v,
                              const CircleSystemConfig& cfg) {
  require_matching(u, cfg);
  require_matching(v, cfg);
  const int M = product_grid_size(cfg.K, cfg.dealias);
  const std::vector<double> u0 = u.to_grid(M);
  const std::vector<double> u1 = derivative(u, 1).to_grid(M);
  const std::vector<double> v0 = v.to_grid(M);
  const std::vector<double> v1 = derivative(v, 1).to_grid(M);
  std::vector<double> g(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) g[j] = u1[j] * v0[j] - u0[j] * v1[j];
  return Fourier1DField::from_grid(g, cfg.K, cfg.L);
}

Fourier1DField circle_rhs(const Fourier1DField& u, const CircleSystemConfig& cfg) {
  Fourier1DField out = Fourier1DField::zeros(cfg.K, cfg.L);
  if (!cfg.linear_only) out = -1.0 * adT_self_circle(u, cfg);
  if (cfg.a != 0.0) out = out + cfg.a * solve_inertia_ab(derivative(u, 3), cfg);
  return out;
}

CircleSystem::CircleSystem(CircleSystemConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::string CircleSystem::name() const {
  if (cfg_.alpha == 1.0 && cfg_.beta == 0.0) return cfg_.a == 0.0 ? "burgers" : "kdv";
  if (cfg_.alpha == 1.0 && cfg_.beta == 1.0) return cfg_.a == 0.0 ? "ch" : "gch";
  return "circle";
}

Fourier1DField CircleSystem::field(ConstView u) const {
  require_dim(u, "circle state");
  return Fourier1DField::from_real(u, cfg_.L);
}

double CircleSystem::inner_product(ConstView u, ConstView v) const {
  return h1ab_inner(field(u), field(v), cfg_);
}

double CircleSystem::pairing(ConstView m, ConstView v) const {
  return l2_pairing(field(m), field(v));
}

Vec CircleSystem::apply_inertia(ConstView u) const {
  return apply_inertia_ab(field(u), cfg_).to_real();
}

Vec CircleSystem::solve_inertia(ConstView m) const {
  return solve_inertia_ab(field(m), cfg_).to_real();
}

Vec CircleSystem::adT_self(ConstView u) const {
  if (cfg_.linear_only) {
    require_dim(u, "adT_self");
    return Vec(dim(), 0.0);
  }
  return adT_self_circle(field(u), cfg_).to_real();
}

Vec CircleSystem::lorentz(ConstView u) const { return lorentz_gf(field(u), cfg_).to_real(); }

double CircleSystem::cocycle(ConstView u, ConstView v) const {
  return gelfand_fuchs(field(u), field(v));
}

Vec CircleSystem::bracket(ConstView u, ConstView v) const {
  return circle_bracket(field(u), field(v), cfg_).to_real();
}

// -a * lorentz has symbol -a * i kappa^3 / (alpha + beta kappa^2).
std::optional<LinearSymbol> CircleSystem::linear_symbol() const {
  LinearSymbol s;
  s.real_rates = {0.0};
  s.pair_rates.resize(static_cast<std::size_t>(cfg_.K));
  for (int k = 1; k <= cfg_.K; ++k) {
    const double kappa = 2.0 * std::numbers::pi * k / cfg_.L;
    s.pair_rates[k - 1] = {0.0, -cfg_.a * kappa * kappa * kappa / inertia_symbol(cfg_, k)};
  }
  return s;
}

std::vector<std::pair<std::string, double>> CircleSystem::extras(ConstView u) const {
  require_dim(u, "extras");
  return {{"mean", cfg_.L * u[0]}};
}

}  // namespace mea::circle
