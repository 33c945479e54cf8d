#pragma once

#include "dimprof/kernel.hpp"
#include "dimprof/pointset.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace dimprof {

/// Solution of the symmetric packing game
///
///   Z = min over the simplex of max_{i in supp w} (K w)_i  (= min w^T K w),
///
/// whose reciprocal is the weighted packing number N_r(E; psi_s).
struct GameSolution {
  /// Optimal weights, indexed like the rows of the kernel matrix.
  Eigen::VectorXd weights;
  double value = 1.0;
  /// max over the support of |(K w)_i - value|.
  double residual = 0.0;
  /// min over points outside the support of (K w)_j - value; negative means
  /// the point could lower the value (not a local optimum).
  double off_support_slack = 0.0;
  long iterations = 0;
  bool converged = false;
  /// True when the value is the global minimum (exhaustive support search).
  bool exact = false;

  double n_value() const { return 1.0 / value; }
};

struct SolverOptions {
  double tol = 1e-6;
  long max_iters = 1'000'000;
  /// Clouds up to this size are solved by exhaustive support enumeration.
  Eigen::Index exact_limit = 12;
  /// Extra starting point on the simplex; the result is never worse than it.
  std::optional<Eigen::VectorXd> warm_start;
};

GameSolution solve_game(const KernelMatrix& kernel, const SolverOptions& options);
GameSolution solve_game(const KernelMatrix& kernel, double tol = 1e-6, long max_iters = 1'000'000);

/// Kernel matrix at scale r followed by solve_game.
GameSolution z_value(const PointCloud& points, double r, const KernelOrder& order,
                     const SolverOptions& options);
GameSolution z_value(const PointCloud& points, double r, const KernelOrder& order,
                     double tol = 1e-6);

/// The solution weights as a measure on the cloud (zero weights dropped).
WeightedMeasure solution_measure(const PointCloud& points, const GameSolution& solution);

/// Weights entries above 1e-12 as (index, weight) pairs plus the scalar fields.
std::string to_json(const GameSolution& solution);

enum class EntropyMode { greedy, exact };

inline constexpr Eigen::Index kMaxExactEntropyPoints = 24;

/// Number of points pairwise farther apart than 2r, i.e. disjoint closed
/// r-balls centred in the cloud. Exact mode maximizes over all subsets
/// (k <= 24); greedy mode scans points in lexicographic order
/// (a maximum packing in one dimension).
long entropy_number(const PointCloud& points, double r, EntropyMode mode);

/// |1 / Z_inf(r) - N_{r/2}| <= tol, with the exact entropy count.
bool verify_indicator_identity(const PointCloud& points, double r, double tol,
                               const SolverOptions& options = {});

/// Aggregates mu onto the cells [j/n, (j+1)/n): each charged cell's mass goes
/// to the smallest cloud point inside it. One-dimensional input only.
WeightedMeasure coarsen_measure(const WeightedMeasure& mu, int n, const PointCloud& cloud);

}  // namespace dimprof
