#pragma once

#include <cstdint>
#include <random>

namespace dimprof {

/// Standard normal stream for one coordinate of one replicate.
///
/// Streams: coordinate j of a run with seed `seed` reads a std::mt19937_64
/// engine seeded with `seed ^ j`. The engine's output sequence is fixed by
/// the C++ standard; uniforms take the top 53 bits and normals come from the
/// Marsaglia polar method, so samples are reproducible across platforms.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : engine_(seed ^ stream) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dimprof
