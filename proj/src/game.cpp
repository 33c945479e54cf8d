#include "dimprof/game.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dimprof {

namespace {

// Weights below this are treated as zero by the local solver.
constexpr double kPruneWeight = 1e-15;
constexpr long kWarmupSteps = 200;

struct Candidate {
  Eigen::VectorXd weights;
  double value = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool converged = false;
};

// Fills residual and slack for weights already on the simplex.
GameSolution finish(const Eigen::MatrixXd& K, Eigen::VectorXd w, double value, long iterations,
                    bool converged, bool exact) {
  GameSolution sol;
  const Eigen::VectorXd load = K * w;
  sol.residual = 0.0;
  sol.off_support_slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) {
      sol.residual = std::max(sol.residual, std::abs(load(i) - value));
    } else {
      sol.off_support_slack = std::min(sol.off_support_slack, load(i) - value);
    }
  }
  if (!std::isfinite(sol.off_support_slack)) sol.off_support_slack = 0.0;
  sol.weights = std::move(w);
  sol.value = value;
  sol.iterations = iterations;
  sol.converged = converged;
  sol.exact = exact;
  return sol;
}

// Exhaustive search over supports. Any minimizer of w^T K w with minimal
// support S has K_S nonsingular and K_S w_S = value * 1 with w_S > 0, so the
// global minimum is the least 1 / sum(u) over supports where K_S u = 1 has a
// strictly positive solution.
GameSolution solve_exact(const Eigen::MatrixXd& K) {
  const auto k = static_cast<int>(K.rows());
  const std::uint32_t masks = 1u << k;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_w = Eigen::VectorXd::Zero(k);
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(k));
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    idx.clear();
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = K(idx[a], idx[b]);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd u = lu.solve(Eigen::VectorXd::Ones(m));
    if (u.minCoeff() <= 0.0) continue;
    const double value = 1.0 / u.sum();
    if (value < best) {
      best = value;
      best_w.setZero();
      for (Eigen::Index a = 0; a < m; ++a) best_w(idx[a]) = u(a) * value;
    }
  }
  const double value = best_w.dot(K * best_w);
  return finish(K, best_w, value, static_cast<long>(masks - 1), true, true);
}

// KKT gap: most loaded support point against the least loaded point overall.
double gap_of(const Eigen::VectorXd& w, const Eigen::VectorXd& load) {
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) hi = std::max(hi, load(i));
  }
  return hi - load.minCoeff();
}

// Equalizer on the current support: solves K_S u = 1 and rescales onto the
// simplex. Returns nothing unless the solution is strictly positive.
std::optional<Eigen::VectorXd> polish(const Eigen::MatrixXd& K, const Eigen::VectorXd& w,
                                      double threshold) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > threshold) idx.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(idx.size());
  if (m == 0) return std::nullopt;
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index b = 0; b < m; ++b) {
    for (Eigen::Index a = 0; a < m; ++a) sub(a, b) = K(idx[a], idx[b]);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sub);
  const Eigen::VectorXd u = lu.solve(Eigen::VectorXd::Ones(m));
  if (!u.allFinite() || u.minCoeff() <= 0.0) return std::nullopt;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
  const double total = u.sum();
  for (Eigen::Index a = 0; a < m; ++a) out(idx[a]) = u(a) / total;
  // one step of iterative refinement on the equalizer residual
  const Eigen::VectorXd load = K * out;
  double value = out.dot(load);
  Eigen::VectorXd r(m);
  for (Eigen::Index a = 0; a < m; ++a) r(a) = value - load(idx[a]);
  const Eigen::VectorXd du = lu.solve(r);
  for (Eigen::Index a = 0; a < m; ++a) out(idx[a]) += du(a);
  out /= out.sum();
  if (out.minCoeff() < 0.0) return std::nullopt;
  return out;
}

// Multiplicative-weights warm-up: mirror descent on f(w) = w^T K w. With
// entries of K in [0,1], f is 2-smooth relative to the entropy on the simplex,
// so the unit step on the loads K w decreases f monotonically.
long mwu_phase(const Eigen::MatrixXd& K, Eigen::VectorXd& w, Eigen::VectorXd& load, long steps) {
  const Eigen::Index k = K.rows();
  long it = 0;
  for (; it < steps; ++it) {
    const double f = w.dot(load);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (w(i) > 0.0) w(i) *= std::exp(-(load(i) - f));
    }
    w /= w.sum();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (w(i) < kPruneWeight) w(i) = 0.0;
    }
    w /= w.sum();
    load.noalias() = K * w;
  }
  return it;
}

// Pairwise descent: moves mass from the most loaded support point j to the
// point i with the best second-order gain (g_j - g_i)^2 / (2 - 2 K_ij). The
// curvature along e_i - e_j is 2 - 2 K_ij >= 0, so every step is an exact
// convex line search even when K is indefinite. Stops when the KKT gap
// max_{supp} g - min g falls below `gap_tol`.
long pairwise_phase(const Eigen::MatrixXd& K, Eigen::VectorXd& w, Eigen::VectorXd& load,
                    double gap_tol, long steps) {
  const Eigen::Index k = K.rows();
  long it = 0;
  for (; it < steps; ++it) {
    Eigen::Index j = -1;
    double gj = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < k; ++a) {
      if (w(a) > 0.0 && load(a) > gj) {
        gj = load(a);
        j = a;
      }
      gmin = std::min(gmin, load(a));
    }
    if (gj - gmin <= gap_tol) break;
    Eigen::Index i = -1;
    double gain = -1.0;
    double curv_i = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double diff = gj - load(a);
      if (diff <= 0.0) continue;
      const double curv = std::max(2.0 - 2.0 * K(a, j), 1e-300);
      const double g = diff * diff / curv;
      if (g > gain) {
        gain = g;
        i = a;
        curv_i = curv;
      }
    }
    if (i < 0) break;
    const double delta = std::min(w(j), (gj - load(i)) / curv_i);
    w(i) += delta;
    w(j) -= delta;
    if (w(j) <= kPruneWeight * w(i)) {
      w(i) += w(j);
      w(j) = 0.0;
    }
    load.noalias() += delta * (K.col(i) - K.col(j));
    // periodic refresh bounds the drift of the incremental loads
    if ((it & 1023) == 1023) load.noalias() = K * w;
  }
  load.noalias() = K * w;
  return it;
}

// Local search from `w`: multiplicative-weights warm-up, pairwise descent to a
// KKT point, then an exact equalizer solve on the support.
Candidate local_solve(const Eigen::MatrixXd& K, Eigen::VectorXd w, double tol, long budget) {
  Candidate out;
  Eigen::VectorXd load = K * w;
  long it = mwu_phase(K, w, load, std::min<long>(budget / 2, kWarmupSteps));
  it += pairwise_phase(K, w, load, 0.1 * tol, budget - it);

  double value = w.dot(load);
  const double gap = gap_of(w, load);
  out.converged = gap <= tol;
  if (const auto eq = polish(K, w, 0.0)) {
    const Eigen::VectorXd eq_load = K * *eq;
    const double eq_value = eq->dot(eq_load);
    if (eq_value <= value + 0.1 * tol && gap_of(*eq, eq_load) <= tol) {
      w = *eq;
      value = eq_value;
      out.converged = true;
    }
  }
  out.weights = std::move(w);
  out.value = value;
  out.iterations = it;
  return out;
}

// One sweep of projected coordinate descent on 1/2 v^T K v - sum(v), v >= 0,
// from v = 0 in index order. For the indicator kernel this is the greedy
// packing; in general it gives a sparse, well-spread start.
Eigen::VectorXd greedy_start(const Eigen::MatrixXd& K) {
  const Eigen::Index k = K.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double vi = std::max(0.0, 1.0 - load(i));
    if (vi > 0.0) {
      v(i) = vi;
      load += vi * K.col(i);
    }
  }
  return v / v.sum();
}

}  // namespace

GameSolution solve_game(const KernelMatrix& kernel, const SolverOptions& options) {
  kernel.validate();
  if (!(options.tol > 0.0 && options.tol < 0.1)) {
    throw std::invalid_argument("solver tolerance must lie in (0, 0.1)");
  }
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  const Eigen::MatrixXd& K = kernel.entries;
  const Eigen::Index k = K.rows();
  if (k == 1) return finish(K, Eigen::VectorXd::Ones(1), 1.0, 0, true, true);
  if (k <= options.exact_limit && k <= 24) return solve_exact(K);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
  starts.push_back(greedy_start(K));
  if (options.warm_start) {
    if (options.warm_start->size() != k || options.warm_start->minCoeff() < 0.0 ||
        std::abs(options.warm_start->sum() - 1.0) > kWeightSumTolerance) {
      throw std::invalid_argument("warm start must be a probability vector over the cloud");
    }
    starts.push_back(*options.warm_start);
  }

  Candidate best;
  long total = 0;
  const long budget = std::max<long>(1, options.max_iters / static_cast<long>(starts.size()));
  for (const auto& start : starts) {
    Candidate c = local_solve(K, start, options.tol, budget);
    total += c.iterations;
    // prefer a lower value; among equal values prefer a certified one
    if (c.value < best.value - options.tol ||
        (c.value <= best.value + options.tol && c.converged && !best.converged) ||
        (std::abs(c.value - best.value) <= options.tol && c.converged == best.converged &&
         c.value < best.value)) {
      best = std::move(c);
    }
  }
  GameSolution sol = finish(K, best.weights, best.weights.dot(K * best.weights), total,
                            best.converged, false);
  sol.converged = best.converged && sol.residual <= options.tol;
  return sol;
}

GameSolution solve_game(const KernelMatrix& kernel, double tol, long max_iters) {
  SolverOptions options;
  options.tol = tol;
  options.max_iters = max_iters;
  return solve_game(kernel, options);
}

GameSolution z_value(const PointCloud& points, double r, const KernelOrder& order,
                     const SolverOptions& options) {
  return solve_game(kernel_matrix(points, r, order), options);
}

GameSolution z_value(const PointCloud& points, double r, const KernelOrder& order, double tol) {
  SolverOptions options;
  options.tol = tol;
  return z_value(points, r, order, options);
}

WeightedMeasure solution_measure(const PointCloud& points, const GameSolution& solution) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < solution.weights.size(); ++i) {
    if (solution.weights(i) > 0.0) idx.push_back(i);
  }
  Eigen::MatrixXd support(static_cast<Eigen::Index>(idx.size()), points.dim());
  Eigen::VectorXd w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    support.row(static_cast<Eigen::Index>(a)) = points.points().row(idx[a]);
    w(static_cast<Eigen::Index>(a)) = solution.weights(idx[a]);
  }
  return WeightedMeasure(std::move(support), w / w.sum());
}

std::string to_json(const GameSolution& solution) {
  nlohmann::json j;
  j["value"] = solution.value;
  j["n_value"] = solution.n_value();
  j["residual"] = solution.residual;
  j["iterations"] = solution.iterations;
  j["converged"] = solution.converged;
  j["exact"] = solution.exact;
  auto weights = nlohmann::json::array();
  for (Eigen::Index i = 0; i < solution.weights.size(); ++i) {
    if (solution.weights(i) > 1e-12) weights.push_back({i, solution.weights(i)});
  }
  j["weights"] = std::move(weights);
  return j.dump();
}

long entropy_number(const PointCloud& points, double r, EntropyMode mode) {
  if (!(r > 0.0)) throw std::invalid_argument("scale r must be positive");
  const Eigen::MatrixXd& x = points.points();
  const Eigen::Index k = points.size();
  const double sep = 2.0 * r;

  if (mode == EntropyMode::greedy) {
    // lexicographic scan; optimal on the line
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::lexicographical_compare(x.row(a).begin(), x.row(a).end(), x.row(b).begin(),
                                          x.row(b).end());
    });
    std::vector<Eigen::Index> chosen;
    for (Eigen::Index i : order) {
      bool free = true;
      for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
        if ((x.row(i) - x.row(*it)).norm() <= sep) {
          free = false;
          break;
        }
      }
      if (free) chosen.push_back(i);
    }
    return static_cast<long>(chosen.size());
  }

  if (k > kMaxExactEntropyPoints) {
    throw std::invalid_argument("exact entropy number limited to 24 points");
  }
  // conflict[i]: points within 2r of point i
  std::vector<std::uint32_t> conflict(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i != j && (x.row(i) - x.row(j)).norm() <= sep) conflict[i] |= 1u << j;
    }
  }
  // enumerate every admissible subset; a branch is cut only when it cannot
  // beat the current best even by taking all remaining points
  long best = 0;
  auto search = [&](auto&& self, Eigen::Index next, std::uint32_t blocked, long count) -> void {
    if (count + (k - next) <= best) return;
    if (next == k) {
      best = count;
      return;
    }
    if (!(blocked & (1u << next))) self(self, next + 1, blocked | conflict[next], count + 1);
    self(self, next + 1, blocked, count);
  };
  search(search, 0, 0u, 0);
  return best;
}

bool verify_indicator_identity(const PointCloud& points, double r, double tol,
                               const SolverOptions& options) {
  const GameSolution sol = z_value(points, r, KernelOrder::infinity(), options);
  const auto mode = points.size() <= kMaxExactEntropyPoints ? EntropyMode::exact : EntropyMode::greedy;
  const long count = entropy_number(points, r / 2.0, mode);
  return std::abs(sol.n_value() - static_cast<double>(count)) <= tol;
}

WeightedMeasure coarsen_measure(const WeightedMeasure& mu, int n, const PointCloud& cloud) {
  if (n < 1) throw std::invalid_argument("cell count n must be positive");
  if (mu.dim() != 1 || cloud.dim() != 1) {
    throw std::invalid_argument("coarsen_measure is defined for one-dimensional sets");
  }
  auto cell_of = [n](double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("points must lie in [0,1)");
    return std::min(n - 1, static_cast<int>(std::floor(x * n)));
  };
  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    mass[static_cast<std::size_t>(cell_of(mu.support()(i, 0)))] += mu.weights()(i);
  }
  std::vector<double> rep(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double x = cloud.points()(i, 0);
    auto& slot = rep[static_cast<std::size_t>(cell_of(x))];
    slot = std::min(slot, x);
  }
  std::vector<double> xs;
  std::vector<double> ws;
  for (int j = 0; j < n; ++j) {
    if (mass[j] <= 0.0) continue;
    if (!std::isfinite(rep[j])) {
      throw std::invalid_argument("a charged cell contains no cloud point");
    }
    xs.push_back(rep[j]);
    ws.push_back(mass[j]);
  }
  return WeightedMeasure(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                         Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size())));
}

}  // namespace dimprof
