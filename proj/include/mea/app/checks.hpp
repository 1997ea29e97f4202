#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mea::app {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Sizes and switches for the invariant suite. Magnetic systems use
/// `strength`; with strength 0 every magnetic check reduces to its
/// geodesic counterpart.
struct CheckOptions {
  std::uint64_t seed = 0;
  int samples = 20;
  double strength = 1.0;
  /// Negative control: every system's bracket is replaced by its negative.
  bool flip_bracket = false;

  int circle_K = 32;
  int circle_band = 10;
  int sphere_lmax = 16;
  int torus_K = 6;
  int extension_steps = 200;  // trajectory length for extension equivalence
  int scaling_steps = 50;
  int momentum_steps = 50;
};

std::vector<CheckResult> adjoint_identity_checks(const CheckOptions& opt);
std::vector<CheckResult> pairing_identity_checks(const CheckOptions& opt);
std::vector<CheckResult> cocycle_checks(const CheckOptions& opt);
std::vector<CheckResult> lorentz_skewness_checks(const CheckOptions& opt);
std::vector<CheckResult> deformation_checks(const CheckOptions& opt);
std::vector<CheckResult> extension_checks(const CheckOptions& opt);
std::vector<CheckResult> strength_scaling_checks(const CheckOptions& opt);
std::vector<CheckResult> steady_state_checks(const CheckOptions& opt);
std::vector<CheckResult> momentum_velocity_checks(const CheckOptions& opt);
std::vector<CheckResult> inertia_checks(const CheckOptions& opt);

/// Every group above, in that order.
std::vector<CheckResult> run_check_suite(const CheckOptions& opt);

/// "PASS <name> residual=... tol=... [detail]"
std::string format_check(const CheckResult& r);

}  // namespace mea::app
