#include "mea/circle/galerkin_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mea/errors.hpp"

namespace mea::circle {

namespace {

struct Samples {
  std::vector<double> f, fx, fxx;
};

// u, u_x, u_xx at the given points by direct trigonometric summation.
Samples sample(const Fourier1DField& u, const std::vector<double>& x) {
  Samples s;
  s.f.assign(x.size(), u.coeffs[0].real());
  s.fx.assign(x.size(), 0.0);
  s.fxx.assign(x.size(), 0.0);
  for (int k = 1; k <= u.K(); ++k) {
    const double kap = u.wavenumber(k);
    const double re = 2.0 * u.coeffs[k].real();
    const double im = 2.0 * u.coeffs[k].imag();
    if (re == 0.0 && im == 0.0) continue;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double c = std::cos(kap * x[q]);
      const double sn = std::sin(kap * x[q]);
      // 2 Re(c_k e^{i kap x}) = re cos - im sin
      s.f[q] += re * c - im * sn;
      s.fx[q] += kap * (-re * sn - im * c);
      s.fxx[q] += -kap * kap * (re * c - im * sn);
    }
  }
  return s;
}

}  // namespace

Fourier1DField galerkin_adT_oracle(const Fourier1DField& u, const CircleSystemConfig& cfg,
                                   int K_test) {
  if (K_test < 1) throw ContractViolation("K_test must be positive");
  const int band = u.bandwidth();
  if (K_test < 2 * band)
    throw ContractViolation("K_test must be at least twice the bandwidth of u");

  const int Q = 3 * std::max(K_test, band) + 1;
  const double L = u.period;
  std::vector<double> x(static_cast<std::size_t>(Q));
  for (int q = 0; q < Q; ++q) x[q] = L * q / Q;
  const double w = L / Q;

  const Samples us = sample(u, x);

  // Basis: index 0 -> 1, 2k-1 -> cos(kap_k x), 2k -> sin(kap_k x).
  const int n = 2 * K_test + 1;
  Eigen::MatrixXd phi(n, Q), dphi(n, Q), ddphi(n, Q);
  for (int q = 0; q < Q; ++q) {
    phi(0, q) = 1.0;
    dphi(0, q) = 0.0;
    ddphi(0, q) = 0.0;
    for (int k = 1; k <= K_test; ++k) {
      const double kap = 2.0 * std::numbers::pi * k / L;
      const double c = std::cos(kap * x[q]);
      const double s = std::sin(kap * x[q]);
      phi(2 * k - 1, q) = c;
      dphi(2 * k - 1, q) = -kap * s;
      ddphi(2 * k - 1, q) = -kap * kap * c;
      phi(2 * k, q) = s;
      dphi(2 * k, q) = kap * c;
      ddphi(2 * k, q) = -kap * kap * s;
    }
  }

  Eigen::MatrixXd gram = w * (cfg.alpha * phi * phi.transpose() + cfg.beta * dphi * dphi.transpose());
  Eigen::VectorXd load(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int q = 0; q < Q; ++q) {
      // [u, phi] = u_x phi - u phi_x and its x-derivative u_xx phi - u phi_xx
      const double br = us.fx[q] * phi(i, q) - us.f[q] * dphi(i, q);
      const double dbr = us.fxx[q] * phi(i, q) - us.f[q] * ddphi(i, q);
      acc += cfg.alpha * us.f[q] * br + cfg.beta * us.fx[q] * dbr;
    }
    load(i) = w * acc;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SolverError("Galerkin Gram matrix is not positive definite");
  const Eigen::VectorXd c = ldlt.solve(load);
  if (!c.allFinite()) throw SolverError("Galerkin oracle solve produced non-finite values");

  Fourier1DField out = Fourier1DField::zeros(K_test, L);
  out.coeffs[0] = {c(0), 0.0};
  for (int k = 1; k <= K_test; ++k) out.coeffs[k] = {0.5 * c(2 * k - 1), -0.5 * c(2 * k)};
  return out;
}

}  // namespace mea::circle
