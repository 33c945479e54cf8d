#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace dimprof {

using Point = Eigen::VectorXd;

/// Absolute tolerance under which two points are considered the same point.
inline constexpr double kDuplicateTolerance = 1e-12;

/// Hard cap on the number of points any generator may produce.
inline constexpr std::size_t kMaxCloudPoints = 10'000'000;

/// Finite point set in R^N, one point per row.
///
/// Construction validates the invariants (nonempty, finite coordinates,
/// pairwise distinct within kDuplicateTolerance); use `merged` when the input
/// may contain repeats.
class PointCloud {
 public:
  PointCloud(Eigen::MatrixXd points, double resolution, std::string label = {});

  /// Builds a cloud after dropping repeats (first occurrence wins, order kept).
  static PointCloud merged(const Eigen::MatrixXd& points, double resolution,
                           std::string label = {});

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  Point point(Eigen::Index i) const { return points_.row(i).transpose(); }
  double resolution() const { return resolution_; }
  const std::string& label() const { return label_; }

  /// Largest pairwise Euclidean distance.
  double diameter() const;

  bool operator==(const PointCloud& other) const = default;

 private:
  Eigen::MatrixXd points_;
  double resolution_;
  std::string label_;
};

/// A contracting similarity x -> ratio * x + translation.
struct Similarity {
  double ratio;
  Point translation;
};

struct IfsSpec {
  std::vector<Similarity> maps;
  Eigen::Index dim = 1;
  /// Recorded by the caller; not checked.
  bool open_set_condition = true;

  void validate() const;
};

/// Left endpoints of the level-`level` intervals of the middle Cantor set with
/// contraction `ratio` in (0, 1/2].
PointCloud gen_cantor(double ratio, int level);

/// Images of the origin under every length-`level` composition of the maps.
/// Compositions are enumerated with the outermost map as the most significant
/// digit, so the two-map Cantor system produces ascending output.
PointCloud gen_ifs(const IfsSpec& spec, int level);

/// Two-map IFS {x -> r x, x -> r x + 1 - r} on the line.
IfsSpec cantor_ifs(double ratio);

/// Four-map planar dust with the given ratio, one map per corner of [0,1]^2.
IfsSpec corner_dust_ifs(double ratio);

PointCloud product(const PointCloud& a, const PointCloud& b);

/// Orthogonal projection onto the line spanned by a unit `direction`.
/// Output is sorted ascending with repeats merged.
PointCloud project(const PointCloud& cloud, const Eigen::Ref<const Eigen::VectorXd>& direction);

/// Rounds every coordinate to the nearest multiple of `spacing`.
PointCloud snap_to_grid(const PointCloud& cloud, double spacing);

/// Uniform direction on the unit circle for angle theta.
Eigen::Vector2d unit_direction(double theta);

// Serialization. CSV holds one point per row, 17 significant digits.
void write_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_csv(std::istream& is, double resolution, std::string label = {});
std::string to_json(const PointCloud& cloud);

}  // namespace dimprof
