#pragma once

#include <cstddef>
#include <vector>

namespace mea::sphere {

/// Real spherical-harmonic coefficients under triangular truncation l <= lmax.
///
/// The basis is orthonormal on the unit sphere (dA = dz dlambda, z = cos of
/// colatitude):
///   Y_{l,0}  = Pbar_l0(z) / sqrt(2 pi)
///   Y_{l,m}  = Pbar_lm(z) cos(m lambda) / sqrt(pi)     m > 0
///   Y_{l,-m} = Pbar_lm(z) sin(m lambda) / sqrt(pi)     m > 0
/// where Pbar_lm has unit L2 norm on [-1, 1] (no Condon-Shortley phase).
///
/// Layout: the m = 0 column (l = 0..lmax), then for m = 1..lmax the cosine
/// column (l = m..lmax) followed by the sine column.
struct SphereField {
  int lmax = 0;
  std::vector<double> coeffs;

  static SphereField zeros(int lmax);
  static std::size_t size(int lmax) {
    return static_cast<std::size_t>(lmax + 1) * static_cast<std::size_t>(lmax + 1);
  }
  /// Signed order: m >= 0 selects the cosine part, m < 0 the sine part.
  static std::size_t index(int lmax, int l, int m);

  double get(int l, int m) const { return coeffs[index(lmax, l, m)]; }
  void set(int l, int m, double v) { coeffs[index(lmax, l, m)] = v; }

  /// Copy with a different truncation (drops or zero-pads degrees).
  SphereField retruncated(int new_lmax) const;

  /// Coefficient-space L2 norm (equals the field's L2 norm on the sphere).
  double l2_norm() const;
  /// Integral over the sphere.
  double mean_integral() const;

  SphereField& operator+=(const SphereField& o);
  SphereField& operator-=(const SphereField& o);
  SphereField& operator*=(double s);
};

SphereField operator+(SphereField a, const SphereField& b);
SphereField operator-(SphereField a, const SphereField& b);
SphereField operator*(double s, SphereField a);

/// Integral of f * g (dot product in the orthonormal basis).
double l2_inner(const SphereField& f, const SphereField& g);

}  // namespace mea::sphere
