#pragma once

#include <string>

#include "mea/core/flow_system.hpp"
#include "mea/core/integrators.hpp"
#include "mea/sphere/sphere_field.hpp"
#include "mea/sphere/transform.hpp"

namespace mea::sphere {

/// Global quasi-geostrophic flow on the unit sphere.
///   q = (gamma z^2 - Delta) psi + a phi,   q_t = -{psi, q}
///   phi = 2z/Ro + 2 z h   (or 2 z h / Ro with phi_topography_over_Ro)
struct QGConfig {
  double gamma = 0.0;
  double Ro = 1.0;
  double a = 1.0;
  int lmax = 42;
  SphereField h;  // empty coefficients mean flat bottom
  /// Multiplies the Laplacian eigenvalues -l(l+1).
  double radius_convention = 1.0;
  bool phi_topography_over_Ro = false;
  /// Products on the 3/2-padded grid (exact) instead of the minimal grid.
  bool dealias = true;

  void validate() const;
  SphereField topography() const;  // h at lmax (zeros if unset)
};

/// Coefficient (l, m) times -l(l+1) * radius_convention.
SphereField laplacian(const SphereField& f, double radius_convention = 1.0);

/// z f computed by the exact recurrence, truncated to out_lmax.
SphereField multiply_z(const SphereField& f, int out_lmax);

enum class Headroom { keep, truncate };
/// z^2 f via two z-recurrences. `keep` returns degree lmax + 2 (exact);
/// `truncate` projects back to lmax.
SphereField multiply_z2(const SphereField& f, Headroom headroom = Headroom::truncate);

/// d/dlambda f d/dz g - d/dz f d/dlambda g, truncated to lmax. Products are
/// formed on the padded grid when `dealias` is set.
SphereField poisson_bracket(const SphereField& f, const SphereField& g, bool dealias = true);

/// Projection of (gamma z^2 - Delta) f onto degrees <= lmax.
SphereField apply_contact_laplacian(const SphereField& f, const QGConfig& cfg);

/// Solves (gamma z^2 - Delta) psi = r per order m and parity with a
/// symmetric tridiagonal factorization. For gamma = 0 the mean of r must
/// vanish (NonInvertibleMode otherwise) and psi has zero mean.
SphereField invert_stream(const SphereField& r, const QGConfig& cfg);

/// Matrix-free conjugate-gradient reference for invert_stream; the z^2
/// product is formed on a quadrature grid.
SphereField invert_stream_cg(const SphereField& r, const QGConfig& cfg, double tol = 1e-14,
                             int max_iter = 10000);

/// Unit-strength correction field 2z/Ro + 2 z h (topography product on the grid).
SphereField phi_field(const QGConfig& cfg);

/// -{psi, q} with psi = invert_stream(q - a phi).
SphereField qg_rhs(const SphereField& q, const QGConfig& cfg);

SphereField q_from_f(const SphereField& f, const QGConfig& cfg);
SphereField f_from_q(const SphereField& q, const QGConfig& cfg);

/// energy = 1/2 int psi (gamma z^2 - Delta) psi, enstrophy = int q^2, mean = int q.
DiagnosticsRecord qg_diagnostics(const SphereField& q, const QGConfig& cfg, double t = 0.0);

/// Stream-function (f) formulation as a flow system on coefficient vectors.
/// Inner product int f (gamma z^2 - Delta) g, bracket -{f, g},
/// cocycle -int phi {f, g}, Lorentz force -(gamma z^2 - Delta)^{-1} {phi, f}.
class QGSystem final : public FlowSystem {
 public:
  explicit QGSystem(QGConfig cfg);
  const QGConfig& config() const { return cfg_; }

  std::string name() const override { return "qg"; }
  std::size_t dim() const override { return SphereField::size(cfg_.lmax); }
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
  std::vector<std::string> extra_names() const override { return {"enstrophy", "mean"}; }

  SphereField field(ConstView u) const;
  const SphereField& phi() const { return phi_; }

 private:
  QGConfig cfg_;
  SphereField phi_;
};

}  // namespace mea::sphere
