#include "dimprof/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dimprof {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const auto n = static_cast<long>(data.size());
  if (!is_power_of_two(n)) throw std::invalid_argument("FFT length must be a power of two");

  for (long i = 1, j = 0; i < n; ++i) {
    long bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n / 2));
  for (long k = 0; k < n / 2; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  for (long len = 2; len <= n; len <<= 1) {
    const long stride = n / len;
    for (long start = 0; start < n; start += len) {
      for (long k = 0; k < len / 2; ++k) {
        const auto u = data[start + k];
        const auto v = data[start + k + len / 2] * twiddle[k * stride];
        data[start + k] = u + v;
        data[start + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace dimprof
