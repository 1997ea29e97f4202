#pragma once

#include "mea/circle/circle_system.hpp"

namespace mea::circle {

/// Brute-force ad^T_u(u) from its defining identity
/// <adT_u u, w> = <u, [u, w]> for all w in a K_test trigonometric basis.
///
/// Builds the dense H^1_{alpha,beta} Gram matrix of {1, cos kx, sin kx} and
/// the load vector w -> <u, [u, w]> by direct point evaluation on a uniform
/// grid (no FFTs), then solves the linear system. Requires
/// K_test >= 2 * bandwidth(u). Returns a field truncated at K_test.
Fourier1DField galerkin_adT_oracle(const Fourier1DField& u, const CircleSystemConfig& cfg,
                                   int K_test);

}  // namespace mea::circle
