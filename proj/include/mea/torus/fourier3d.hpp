#pragma once

#include <array>
#include <complex>
#include <vector>

#include "mea/core/flow_system.hpp"

namespace mea::torus {

using cplx = std::complex<double>;

/// Fourier coefficients of a real field on the 2pi-periodic 3-torus:
///   u(x) = sum_k c(k) exp(i k.x),  |kx|, |ky|, |kz| <= K.
/// Only kz >= 0 is stored; entries with kz < 0 follow from
/// c(-k) = conj(c(k)). On the kz = 0 plane both halves are stored and kept
/// Hermitian.
struct Fourier3DScalarField {
  int K = 0;
  std::vector<cplx> c;

  static Fourier3DScalarField zeros(int K);
  static std::size_t size(int K) {
    const std::size_t w = static_cast<std::size_t>(2 * K + 1);
    return w * w * static_cast<std::size_t>(K + 1);
  }
  static std::size_t index(int K, int kx, int ky, int kz) {
    const std::size_t w = static_cast<std::size_t>(2 * K + 1);
    return (static_cast<std::size_t>(kx + K) * w + static_cast<std::size_t>(ky + K)) *
               static_cast<std::size_t>(K + 1) +
           static_cast<std::size_t>(kz);
  }
  /// Any kz sign; zero outside the truncation.
  cplx coeff(int kx, int ky, int kz) const;
  double max_abs() const;
};

/// Three scalar coefficient arrays (x, y, z components).
struct Fourier3DVectorField {
  int K = 0;
  std::array<std::vector<cplx>, 3> c;

  static Fourier3DVectorField zeros(int K);
  std::size_t size() const { return Fourier3DScalarField::size(K); }
  cplx& at(int comp, int kx, int ky, int kz) { return c[comp][Fourier3DScalarField::index(K, kx, ky, kz)]; }
  cplx coeff(int comp, int kx, int ky, int kz) const;

  /// Real coordinates: component-major, then (Re, Im) of each stored entry.
  Vec to_real() const;
  static Fourier3DVectorField from_real(ConstView v, int K);
  static std::size_t real_dim(int K) { return 6 * Fourier3DScalarField::size(K); }

  /// Coefficient-space L2 norm sqrt(sum over all k of |c(k)|^2).
  double coeff_norm() const;
  /// Makes the kz = 0 plane exactly Hermitian (the mean becomes real).
  void symmetrize();

  Fourier3DVectorField& operator+=(const Fourier3DVectorField& o);
  Fourier3DVectorField& operator-=(const Fourier3DVectorField& o);
  Fourier3DVectorField& operator*=(double s);
};

Fourier3DVectorField operator+(Fourier3DVectorField a, const Fourier3DVectorField& b);
Fourier3DVectorField operator-(Fourier3DVectorField a, const Fourier3DVectorField& b);
Fourier3DVectorField operator*(double s, Fourier3DVectorField a);

/// Vector field sampled on the uniform n^3 grid x_j = 2 pi j / n, stored
/// row-major (x, y, z) with z fastest.
struct GridVectorField {
  int n = 0;
  std::array<std::vector<double>, 3> v;
};

/// Grid size used for quadratic products: alias-free (>= 3K+1) when `dealias`.
int product_grid_size(int K, bool dealias);

std::vector<double> synthesize(const Fourier3DScalarField& f, int n);
Fourier3DScalarField analyze(const std::vector<double>& values, int n, int K);
GridVectorField synthesize(const Fourier3DVectorField& u, int n);
Fourier3DVectorField analyze(const GridVectorField& g, int K);

/// (2 pi)^3 sum_k Re(u(k) . conj(v(k))), the L2 pairing.
double l2_inner3d(const Fourier3DVectorField& u, const Fourier3DVectorField& v);
/// 1/2 int |u|^2 by Parseval.
double energy3d(const Fourier3DVectorField& u);

/// Symbol I - k k^T / |k|^2; identity on the mean.
Fourier3DVectorField leray_project(const Fourier3DVectorField& v);
Fourier3DVectorField curl(const Fourier3DVectorField& u);
Fourier3DScalarField divergence(const Fourier3DVectorField& u);
/// max_k |k . u(k)|
double divergence_max(const Fourier3DVectorField& u);
Fourier3DVectorField gradient(const Fourier3DScalarField& f);

/// Pointwise cross product on the grid.
GridVectorField cross(const GridVectorField& a, const GridVectorField& b);

}  // namespace mea::torus
