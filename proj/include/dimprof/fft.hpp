#pragma once

#include <complex>
#include <vector>

namespace dimprof {

/// In-place radix-2 discrete Fourier transform,
///   X_k = sum_j x_j exp(-2 pi i j k / n),
/// or its unnormalized inverse (sign +) when `inverse` is set. The length must
/// be a power of two. Twiddles are computed directly per index, so results
/// are bit-identical across runs.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse = false);

bool is_power_of_two(long n);

}  // namespace dimprof
