#include "mea/app/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "mea/torus/ic.hpp"

namespace mea::app {

circle::Fourier1DField random_circle(int K, int band, Rng& rng, double period, bool with_mean) {
  std::normal_distribution<double> n(0.0, 1.0);
  circle::Fourier1DField f = circle::Fourier1DField::zeros(K, period);
  if (with_mean) f.coeffs[0] = {n(rng), 0.0};
  for (int k = 1; k <= std::min(band, K); ++k) {
    const double re = n(rng), im = n(rng);
    f.coeffs[k] = {re / k, im / k};
  }
  return f;
}

sphere::SphereField random_sphere(int lmax, int band, Rng& rng, bool with_mean) {
  std::normal_distribution<double> n(0.0, 1.0);
  sphere::SphereField f = sphere::SphereField::zeros(lmax);
  band = std::min(band, lmax);
  for (int m = -band; m <= band; ++m)
    for (int l = std::max(std::abs(m), with_mean ? 0 : 1); l <= band; ++l) f.set(l, m, n(rng) / (1.0 + l));
  return f;
}

torus::Fourier3DVectorField random_torus(int K, int band, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  torus::Fourier3DVectorField u = torus::Fourier3DVectorField::zeros(K);
  band = std::min(band, K);
  for (int d = 0; d < 3; ++d)
    for (int kx = -band; kx <= band; ++kx)
      for (int ky = -band; ky <= band; ++ky)
        for (int kz = 0; kz <= band; ++kz) {
          const double k2 = static_cast<double>(kx * kx + ky * ky + kz * kz);
          const double re = n(rng), im = n(rng);
          u.at(d, kx, ky, kz) = k2 == 0.0 ? torus::cplx{} : torus::cplx(re, im) / (1.0 + k2);
        }
  u.symmetrize();
  return torus::leray_project(u);
}

}  // namespace mea::app
