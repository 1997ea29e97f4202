#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mea {

using Vec = std::vector<double>;
using ConstView = std::span<const double>;

/// Diagonal linear part of a right-hand side, used by the integrating-factor
/// stepper. The state is read as `real_rates.size()` leading real
/// coordinates followed by (re, im) pairs, one per entry of `pair_rates`.
struct LinearSymbol {
  std::vector<double> real_rates;
  std::vector<std::complex<double>> pair_rates;

  std::size_t dim() const { return real_rates.size() + 2 * pair_rates.size(); }

  /// Returns exp(h * L) u.
  Vec propagate(ConstView u, double h) const;
};

/// A right-invariant magnetic system truncated to `dim()` real coordinates.
///
/// Coordinates are module specific (Fourier, spherical-harmonic, ...), but
/// every implementation satisfies
///
///   inner_product(u, v) == pairing(apply_inertia(u), v)
///   inner_product(lorentz(u), v) == cocycle(u, v)
///   inner_product(adT_self(u), w) == inner_product(u, bracket(u, w))
///
/// so that the magnetic Euler-Arnold velocity is
/// u' = -adT_self(u) - strength() * lorentz(u).
class FlowSystem {
 public:
  virtual ~FlowSystem() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double strength() const = 0;

  virtual double inner_product(ConstView u, ConstView v) const = 0;
  /// Duality between momenta (range of apply_inertia) and velocities.
  virtual double pairing(ConstView m, ConstView v) const = 0;
  virtual Vec apply_inertia(ConstView u) const = 0;
  virtual Vec solve_inertia(ConstView m) const = 0;

  virtual Vec adT_self(ConstView u) const = 0;
  /// Lorentz force at unit strength.
  virtual Vec lorentz(ConstView u) const = 0;
  virtual double cocycle(ConstView u, ConstView v) const = 0;
  virtual Vec bracket(ConstView u, ConstView v) const = 0;

  /// When present, the symbol equals -strength() * lorentz on every state
  /// and -adT_self is the remaining nonlinear part.
  virtual std::optional<LinearSymbol> linear_symbol() const { return std::nullopt; }

  /// System-specific diagnostics (mean, enstrophy, divergence norm, ...).
  virtual std::vector<std::pair<std::string, double>> extras(ConstView u) const {
    (void)u;
    return {};
  }
  virtual std::vector<std::string> extra_names() const { return {}; }

  /// Norm induced by inner_product.
  double norm(ConstView u) const;

 protected:
  void require_dim(ConstView u, const char* what) const;
};

using SystemPtr = std::shared_ptr<const FlowSystem>;

}  // namespace mea
