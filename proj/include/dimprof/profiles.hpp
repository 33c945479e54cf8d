#pragma once

#include "dimprof/game.hpp"
#include "dimprof/kernel.hpp"
#include "dimprof/pointset.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimprof {

/// Strictly decreasing scales r_1 > ... > r_m (m >= 4), consecutive ratios in
/// [1.2, 10].
class ScaleSchedule {
 public:
  explicit ScaleSchedule(std::vector<double> scales);

  /// base^-first, base^-(first+1), ..., base^-last.
  static ScaleSchedule geometric(double base, int first, int last);

  const std::vector<double>& scales() const { return scales_; }
  std::size_t size() const { return scales_.size(); }
  double smallest() const { return scales_.back(); }
  double largest() const { return scales_.front(); }
  /// Every scale multiplied by c > 0.
  ScaleSchedule scaled(double c) const;

 private:
  std::vector<double> scales_;
};

/// Geometric schedule base^-j from the largest scale not above
/// top * diameter down to the smallest scale at least base^margin * resolution
/// (by default two generations of margin above the cloud resolution).
ScaleSchedule default_schedule(const PointCloud& cloud, double base, int margin = 2, double top = 0.25);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  /// Standard error of the slope.
  double stderr_slope = 0.0;
  int n_points = 0;
  double scale_min = 0.0;
  double scale_max = 0.0;
};

/// Ordinary least squares of y on x. Needs at least 4 points.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class ProfileKind { box, box_profile, fh_profile };

std::string to_string(ProfileKind kind);

struct ProfileEstimate {
  ProfileKind kind = ProfileKind::box;
  std::optional<KernelOrder> order;
  double estimate = 0.0;
  SlopeFit fit;
  /// Per-scale data behind the fit (N_r, Z_s(r) or the selected potential).
  std::vector<double> scales;
  std::vector<double> values;
  std::vector<std::string> diagnostics;
};

/// Raised when a profile cannot be computed; `what()` carries the diagnostics.
class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares slope of log N_r (greedy entropy count) against log(1/r).
ProfileEstimate box_dimension(const PointCloud& cloud, const ScaleSchedule& schedule);

/// Least-squares slope of log Z_s(r) against log r.
ProfileEstimate box_profile(const PointCloud& cloud, const KernelOrder& order,
                            const ScaleSchedule& schedule, const SolverOptions& options = {});

inline constexpr double kDefaultQuantile = 0.05;

/// Per support point slope of log F_s^mu(x, r) against log r; the estimate is
/// the mu-weighted lower `quantile` of those slopes.
ProfileEstimate fh_profile(const WeightedMeasure& mu, const KernelOrder& order,
                           const ScaleSchedule& schedule, double quantile = kDefaultQuantile);

struct ProfileCurve {
  std::vector<ProfileEstimate> estimates;
  /// Estimates non-decreasing in s up to twice the combined standard error.
  bool monotone = true;
  std::vector<std::string> violations;
};

/// box_profile for every order in an ascending grid.
ProfileCurve profile_curve(const PointCloud& cloud, const std::vector<KernelOrder>& s_grid,
                           const ScaleSchedule& schedule, const SolverOptions& options = {});

/// Text stating the regularity assumption under which box profiles stand in
/// for packing profiles.
extern const char* const kRegularityNote;

std::string to_json(const ProfileEstimate& estimate);
/// Columns: s, estimate, stderr, r2.
void write_curve_csv(std::ostream& os, const ProfileCurve& curve);

}  // namespace dimprof
