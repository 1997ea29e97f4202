#pragma once

#include <complex>
#include <span>

namespace mea::fft {

// Unnormalized FFTW transforms with cached plans. Plans are created under a
// lock and executed through the new-array interface, so concurrent callers
// on distinct buffers are safe.
//
// Forward:  out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2
// Backward: out[j] = sum_k in[k] exp(+2 pi i j k / n) over the Hermitian
//           extension of in[0..n/2].

void r2c_1d(int n, std::span<const double> in, std::span<std::complex<double>> out);
void c2r_1d(int n, std::span<const std::complex<double>> in, std::span<double> out);

// Cubic n x n x n grid, row-major (x, y, z) with z fastest. Complex side has
// shape n x n x (n/2 + 1).
void r2c_3d(int n, std::span<const double> in, std::span<std::complex<double>> out);
void c2r_3d(int n, std::span<const std::complex<double>> in, std::span<double> out);

/// Smallest even integer >= min_n whose only prime factors are 2, 3, 5.
int good_size(int min_n);

}  // namespace mea::fft
