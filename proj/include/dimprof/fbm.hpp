#pragma once

#include "dimprof/pointset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace dimprof {

enum class FbmMethod { circulant, cholesky };

std::string to_string(FbmMethod method);
FbmMethod parse_fbm_method(const std::string& text);

/// d-dimensional fractional Brownian motion sampled at t_j = j / n,
/// j = 0..n (n + 1 grid points, n increments).
struct FbmPath {
  long n = 0;
  double hurst = 0.5;
  std::uint64_t seed = 0;
  FbmMethod method = FbmMethod::circulant;
  /// (n + 1) x d; row 0 is the origin.
  Eigen::MatrixXd values;

  Eigen::Index dim() const { return values.cols(); }
  double time(long j) const { return static_cast<double>(j) / static_cast<double>(n); }
};

/// The circulant embedding produced an eigenvalue below -1e-8 * max.
class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kMaxCirculantSteps = 1L << 22;
inline constexpr long kMaxCholeskySteps = 1L << 12;

/// Autocovariance of unit-lag increments on a grid of spacing `step`:
/// (step^{2H} / 2)(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocovariance(double hurst, double step, long k);

/// Cov(X_j(s), X_j(t)) = (|s|^{2H} + |t|^{2H} - |s-t|^{2H}) / 2.
double fbm_covariance(double hurst, double s, double t);

/// Exact Gaussian sample of an fBM path. Coordinate j draws its normals from
/// GaussianStream(seed, j).
FbmPath simulate(long n, int d, double hurst, std::uint64_t seed,
                 FbmMethod method = FbmMethod::circulant);

/// Snaps each parameter point to the nearest grid time (error <= 1/(2n)) and
/// returns the path values there. The image cloud's resolution is its
/// smallest nearest-neighbour distance.
PointCloud image_cloud(const FbmPath& path, const PointCloud& cloud);

/// Rows "t,X_1,...,X_d" with 17 significant digits.
void write_csv(std::ostream& os, const FbmPath& path);
/// {"hurst","n","d","seed","method"}.
std::string metadata_json(const FbmPath& path);
/// Stable cache key derived from the metadata.
std::string cache_key(long n, int d, double hurst, std::uint64_t seed, FbmMethod method);

}  // namespace dimprof
