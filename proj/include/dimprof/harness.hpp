#pragma once

#include "dimprof/config.hpp"
#include "dimprof/pointset.hpp"
#include "dimprof/profiles.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dimprof {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

/// One asserted tolerance: passes when `value relation limit` holds.
struct Check {
  enum class Relation { at_most, at_least };

  std::string name;
  double value = 0.0;
  Relation relation = Relation::at_most;
  double limit = 0.0;
  std::string detail;

  bool pass() const;
};

using Cell = std::variant<double, std::string>;

/// Plot-ready table, one row per scale, replicate, direction or s value.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct ExperimentReport {
  std::string experiment;
  Config config;
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  /// Recoverable failures (a replicate that could not be computed, ...).
  std::vector<std::string> errors;
  double wall_seconds = 0.0;

  /// At least one check, and every check passes.
  bool passed() const;
  const Table* table(const std::string& name) const;
};

/// Names accepted by run_experiment, in a stable order.
const std::vector<std::string>& experiment_names();

/// Documented defaults for one experiment (plus the shared keys
/// seed, output_dir and format).
Config default_config(const std::string& experiment);

/// Fills missing keys from default_config and dispatches.
ExperimentReport run_experiment(const std::string& experiment, Config config);

ExperimentReport run_verify_z2(const Config& config);
ExperimentReport run_verify_entropy_identity(const Config& config);
ExperimentReport run_profile_curve(const Config& config);
ExperimentReport run_verify_main_theorem(const Config& config);
ExperimentReport run_verify_fbm_theorem(const Config& config);
ExperimentReport run_verify_lb1(const Config& config);
ExperimentReport run_verify_sandwich(const Config& config);
ExperimentReport run_verify_projection(const Config& config);
ExperimentReport run_verify_fbm_covariance(const Config& config);

/// Test set named by the keys set / ratio / level / points.
PointCloud make_set(const Config& config);
/// Known dimension of the configured set, when there is one.
std::optional<double> analytic_dimension(const Config& config);
/// Schedule from the keys base ("auto" = 1/ratio for self-similar sets,
/// 2 otherwise) and margin.
ScaleSchedule configured_schedule(const Config& config, const PointCloud& cloud);

/// Seed of Monte Carlo replicate r; the shift keeps coordinate streams
/// (seed ^ j, j < 2^16) of different replicates apart.
inline std::uint64_t replicate_seed(std::uint64_t seed, long replicate) {
  return seed + (static_cast<std::uint64_t>(replicate) << 16);
}

/// Smallest point of the cloud in each occupied cell [j/n, (j+1)/n).
/// One-dimensional clouds in [0, 1) only.
PointCloud cell_representatives(const PointCloud& cloud, int n);

/// Minimum of w^T K w over the simplex by exhaustive grid search with about
/// `budget` grid points, followed by pairwise pattern refinement.
double simplex_grid_minimum(const Eigen::MatrixXd& kernel, long budget);

std::string report_json(const ExperimentReport& report);

enum class ReportFormat { json, csv, both };
ReportFormat parse_report_format(const std::string& text);

/// Writes the report (JSON) and its tables plus checks (CSV) to the
/// configured output_dir. Filenames embed the config hash; each file is
/// written to a temporary name and renamed. Returns the paths written.
std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format);

}  // namespace dimprof
