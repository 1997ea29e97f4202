#pragma once

#include <array>
#include <optional>

#include "mea/core/flow_system.hpp"
#include "mea/torus/fourier3d.hpp"

namespace mea::torus {

/// Infinite-conductivity flow on the flat 3-torus:
///   u_t = -P((u.grad) u) - a P(B x u),   P the Leray projector.
struct ICConfig {
  std::array<double, 3> B{0.0, 0.0, 1.0};
  /// When set, replaces the constant B by a divergence-free field.
  std::optional<Fourier3DVectorField> B_field;
  double a = 1.0;
  int K = 16;
  bool dealias = true;

  void validate() const;
};

/// P(omega x u) with omega = curl u; requires divergence-free u.
Fourier3DVectorField nonlinear_rotational(const Fourier3DVectorField& u, bool dealias = true);
/// P((u.grad) u) from grid products of u and its gradient (test reference).
Fourier3DVectorField nonlinear_convective(const Fourier3DVectorField& u, bool dealias = true);

/// P(B x u); spectral for constant B, grid product for a B field.
Fourier3DVectorField lorentz_ic(const Fourier3DVectorField& u, const ICConfig& cfg);
/// int (B x u) . v
double lichnerowicz(const Fourier3DVectorField& u, const Fourier3DVectorField& v, const ICConfig& cfg);
/// Right-invariant bracket P((w.grad) u - (u.grad) w).
Fourier3DVectorField ic_bracket(const Fourier3DVectorField& u, const Fourier3DVectorField& w,
                                bool dealias = true);

Fourier3DVectorField euler_rhs(const Fourier3DVectorField& u, bool dealias = true);
Fourier3DVectorField ic_rhs(const Fourier3DVectorField& u, const ICConfig& cfg);

/// Throws ContractViolation when max_k |k.u(k)| exceeds tol * (1 + |u|).
void require_divergence_free(const Fourier3DVectorField& u, const char* what, double tol = 1e-10);

class ICSystem final : public FlowSystem {
 public:
  explicit ICSystem(ICConfig cfg);
  const ICConfig& config() const { return cfg_; }

  std::string name() const override { return "ic"; }
  std::size_t dim() const override { return Fourier3DVectorField::real_dim(cfg_.K); }
  double strength() const override { return cfg_.a; }
  double inner_product(ConstView u, ConstView v) const override;
  double pairing(ConstView m, ConstView v) const override;
  Vec apply_inertia(ConstView u) const override;
  Vec solve_inertia(ConstView m) const override;
  Vec adT_self(ConstView u) const override;
  Vec lorentz(ConstView u) const override;
  double cocycle(ConstView u, ConstView v) const override;
  Vec bracket(ConstView u, ConstView v) const override;
  std::vector<std::pair<std::string, double>> extras(ConstView u) const override;
  std::vector<std::string> extra_names() const override { return {"divergence"}; }

  Fourier3DVectorField field(ConstView u) const;

 private:
  ICConfig cfg_;
};

}  // namespace mea::torus
