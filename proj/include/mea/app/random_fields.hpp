#pragma once

#include <random>

#include "mea/circle/fourier1d.hpp"
#include "mea/sphere/sphere_field.hpp"
#include "mea/torus/fourier3d.hpp"

namespace mea::app {

using Rng = std::mt19937_64;

/// Gaussian coefficients on modes 1..band decaying like 1/k, plus an
/// optional mean.
circle::Fourier1DField random_circle(int K, int band, Rng& rng, double period, bool with_mean = true);

/// Gaussian coefficients on degrees <= band decaying like 1/(1 + l).
sphere::SphereField random_sphere(int lmax, int band, Rng& rng, bool with_mean = true);

/// Divergence-free, mean-free, Hermitian field on modes |k_i| <= band with
/// coefficients decaying like 1/(1 + |k|^2).
torus::Fourier3DVectorField random_torus(int K, int band, Rng& rng);

}  // namespace mea::app
