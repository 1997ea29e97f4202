#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "mea/core/flow_system.hpp"

namespace mea::circle {

/// Complex Fourier coefficients of a real function on a circle of length
/// `period`:  u(x) = sum_{|k|<=K} c_k exp(2 pi i k x / period).
/// Only k = 0..K is stored; c_{-k} = conj(c_k) and c_0 is kept real.
struct Fourier1DField {
  std::vector<std::complex<double>> coeffs;
  double period = 2.0 * std::numbers::pi;

  static Fourier1DField zeros(int K, double period = 2.0 * std::numbers::pi);

  int K() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Wavenumber 2 pi k / period.
  double wavenumber(int k) const { return 2.0 * std::numbers::pi * k / period; }
  /// Coefficient for any |k| <= K (zero beyond).
  std::complex<double> coeff(int k) const;
  void set(int k, std::complex<double> c);

  /// Highest k with a non-negligible coefficient.
  int bandwidth(double tol = 0.0) const;

  /// Real coordinates [c_0, Re c_1, Im c_1, ..., Re c_K, Im c_K].
  Vec to_real() const;
  static Fourier1DField from_real(ConstView v, double period);

  /// Samples on x_j = j * period / M, j = 0..M-1 (M >= 2K+1).
  std::vector<double> to_grid(int M) const;
  /// Truncated analysis of grid samples.
  static Fourier1DField from_grid(const std::vector<double>& values, int K, double period);

  double evaluate(double x) const;
};

inline std::size_t real_dim(int K) { return static_cast<std::size_t>(2 * K + 1); }

/// Grid used for products: alias-free (>= 3K+1) when `dealias` is set.
int product_grid_size(int K, bool dealias);

/// Multiplies every coefficient by (2 pi i k / L)^order.
Fourier1DField derivative(const Fourier1DField& f, int order);

/// Product of two fields truncated back to K; exact (alias-free) when
/// `dealias` is set.
Fourier1DField multiply(const Fourier1DField& f, const Fourier1DField& g, bool dealias = true);

Fourier1DField operator+(const Fourier1DField& a, const Fourier1DField& b);
Fourier1DField operator-(const Fourier1DField& a, const Fourier1DField& b);
Fourier1DField operator*(double s, const Fourier1DField& a);

/// Integral of f * g over one period.
double l2_pairing(const Fourier1DField& f, const Fourier1DField& g);

}  // namespace mea::circle
