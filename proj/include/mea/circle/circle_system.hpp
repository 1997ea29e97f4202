#pragma once

#include <string>

#include "mea/circle/fourier1d.hpp"
#include "mea/core/flow_system.hpp"

namespace mea::circle {

/// H^1_{alpha,beta} metric on vector fields of the circle with magnetic
/// field a * c_GF (Gelfand-Fuchs).
struct CircleSystemConfig {
  double alpha = 1.0;
  double beta = 0.0;
  double a = 0.0;
  int K = 64;
  double L = 2.0 * std::numbers::pi;
  bool dealias = true;
  /// Drops the quadratic terms (keeps only the dispersive Lorentz part).
  bool linear_only = false;

  void validate() const;

  /// burgers (1,0,0) | kdv (1,0,a) | ch (1,1,0) | gch (1,1,a)
  static CircleSystemConfig preset(const std::string& name, double a, int K);
};

bool is_circle_preset(const std::string& name);

/// Symbol alpha + beta kappa^2 of the inertia operator at wavenumber k.
double inertia_symbol(const CircleSystemConfig& cfg, int k);

Fourier1DField apply_inertia_ab(const Fourier1DField& u, const CircleSystemConfig& cfg);
/// Throws SingularInertia when a zero symbol meets a nonzero coefficient.
Fourier1DField solve_inertia_ab(const Fourier1DField& m, const CircleSystemConfig& cfg);

/// A^{-1}(3 alpha u u_x - 2 beta u_x u_xx - beta u u_xxx), evaluated in flux
/// form d/dx(3/2 alpha u^2 - beta (u u_xx + u_x^2 / 2)).
Fourier1DField adT_self_circle(const Fourier1DField& u, const CircleSystemConfig& cfg);

/// -A^{-1} u_xxx
Fourier1DField lorentz_gf(const Fourier1DField& u, const CircleSystemConfig& cfg);

/// Integral of u v_xxx.
double gelfand_fuchs(const Fourier1DField& u, const Fourier1DField& v);

/// Integral of alpha u v + beta u_x v_x.
double h1ab_inner(const Fourier1DField& u, const Fourier1DField& v, const CircleSystemConfig& cfg);

/// Right-invariant bracket u_x v - u v_x (the negative of the vector-field
/// commutator).
Fourier1DField circle_bracket(const Fourier1DField& u, const Fourier1DField& v,
                              const CircleSystemConfig& cfg);

/// u_t = -adT_self(u) + a A^{-1} u_xxx
Fourier1DField circle_rhs(const Fourier1DField& u, const CircleSystemConfig& cfg);

class CircleSystem final : public FlowSystem {
 public:
  explicit CircleSystem(CircleSystemConfig cfg);

  const CircleSystemConfig& config() const { return cfg_; }

  std::string name() const override;
  std::size_t dim() const override { return real_dim(cfg_.K); }
  double strength() const override { return cfg_.a; }

  double inner_product(ConstView u, ConstView v) const override;
  double pairing(ConstView m, ConstView v) const override;
  Vec apply_inertia(ConstView u) const override;
  Vec solve_inertia(ConstView m) const override;
  Vec adT_self(ConstView u) const override;
  Vec lorentz(ConstView u) const override;
  double cocycle(ConstView u, ConstView v) const override;
  Vec bracket(ConstView u, ConstView v) const override;
  std::optional<LinearSymbol> linear_symbol() const override;

  std::vector<std::pair<std::string, double>> extras(ConstView u) const override;
  std::vector<std::string> extra_names() const override { return {"mean"}; }

  Fourier1DField field(ConstView u) const;

 private:
  CircleSystemConfig cfg_;
};

}  // namespace mea::circle
