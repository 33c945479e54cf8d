#include "dimprof/harness.hpp"

#include "dimprof/fbm.hpp"
#include "dimprof/game.hpp"
#include "dimprof/kernel.hpp"
#include "dimprof/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace dimprof {

using json = nlohmann::json;

bool Check::pass() const {
  if (!std::isfinite(value)) return false;
  return relation == Relation::at_most ? value <= limit : value >= limit;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from table " + name);
  rows.push_back(std::move(row));
}

bool ExperimentReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

const Table* ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Check at_most(std::string name, double value, double limit, std::string detail = {}) {
  return {std::move(name), value, Check::Relation::at_most, limit, std::move(detail)};
}

Check at_least(std::string name, double value, double limit, std::string detail = {}) {
  return {std::move(name), value, Check::Relation::at_least, limit, std::move(detail)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double order_cell(const KernelOrder& s) { return s.value(); }

SolverOptions solver_options(const Config& config) {
  SolverOptions opt;
  opt.tol = config.get_double("solver_tol");
  opt.max_iters = config.get_long("solver_max_iters");
  return opt;
}

Config shared_defaults() {
  Config c;
  c.set("seed", "20240601");
  c.set("output_dir", "reports");
  c.set("format", "both");
  c.set("solver_tol", "1e-7");
  c.set("solver_max_iters", "1000000");
  return c;
}

// sets --------------------------------------------------------------------

PointCloud interval_cloud(long points) {
  if (points < 1) throw ConfigError("interval needs at least one point");
  Eigen::MatrixXd x(points, 1);
  for (long j = 0; j < points; ++j) x(j, 0) = static_cast<double>(j) / static_cast<double>(points);
  std::ostringstream label;
  label << "interval(points=" << points << ")";
  return PointCloud(x, 1.0 / static_cast<double>(points), label.str());
}

// timing ------------------------------------------------------------------

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ExperimentReport start_report(const std::string& name, const Config& config) {
  ExperimentReport report;
  report.experiment = name;
  report.config = config;
  return report;
}

// random clouds -----------------------------------------------------------

PointCloud random_cloud(GaussianStream& g, Eigen::Index k, Eigen::Index dim, const std::string& label) {
  Eigen::MatrixXd x(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = g.uniform();
  }
  return PointCloud(x, 1e-9, label);
}

long uniform_int(GaussianStream& g, long lo, long hi) {
  return lo + static_cast<long>(g.uniform() * static_cast<double>(hi - lo + 1));
}

double min_gap(const PointCloud& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = i + 1; j < cloud.size(); ++j) {
      best = std::min(best, (cloud.points().row(i) - cloud.points().row(j)).norm());
    }
  }
  return best;
}

std::vector<double> pairwise_distances(const PointCloud& cloud) {
  std::vector<double> d;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = i + 1; j < cloud.size(); ++j) {
      d.push_back((cloud.points().row(i) - cloud.points().row(j)).norm());
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

// simplex grid ------------------------------------------------------------

double binomial(long n, long k) {
  double b = 1.0;
  for (long i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

}  // namespace

double simplex_grid_minimum(const Eigen::MatrixXd& kernel, long budget) {
  const Eigen::Index k = kernel.rows();
  if (k < 1 || kernel.cols() != k) throw std::invalid_argument("kernel must be square and nonempty");
  if (k == 1) return kernel(0, 0);
  long m = 1;
  while (binomial(m + 1 + k - 1, k - 1) <= static_cast<double>(budget)) ++m;

  auto f = [&](const Eigen::VectorXd& w) { return w.dot(kernel * w); };
  // the objective is nonconvex: the best grid point of every face seeds a
  // local refinement
  std::map<std::uint32_t, std::pair<double, Eigen::VectorXd>> seeds;
  Eigen::VectorXd w(k);
  std::vector<long> parts(static_cast<std::size_t>(k), 0);
  std::function<void(Eigen::Index, long)> visit = [&](Eigen::Index i, long left) {
    if (i == k - 1) {
      parts[static_cast<std::size_t>(i)] = left;
      std::uint32_t face = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        w(j) = static_cast<double>(parts[static_cast<std::size_t>(j)]) / static_cast<double>(m);
        if (parts[static_cast<std::size_t>(j)] > 0) face |= 1u << j;
      }
      const double v = f(w);
      auto [it, fresh] = seeds.try_emplace(face, v, w);
      if (!fresh && v < it->second.first) it->second = {v, w};
      return;
    }
    for (long p = 0; p <= left; ++p) {
      parts[static_cast<std::size_t>(i)] = p;
      visit(i + 1, left - p);
    }
  };
  visit(0, m);

  // pattern refinement along edge directions e_i - e_j with i, j in `allowed`
  auto refine = [&](double& best, Eigen::VectorXd& best_w, std::uint32_t allowed) {
    for (double h = 1.0 / static_cast<double>(m); h > 1e-12; h *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (Eigen::Index i = 0; i < k; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j || best_w(j) <= 0.0 || !((allowed >> i) & 1u) || !((allowed >> j) & 1u)) continue;
            Eigen::VectorXd trial = best_w;
            const double step = std::min(h, best_w(j));
            trial(i) += step;
            trial(j) -= step;
            const double v = f(trial);
            if (v < best - 1e-16) {
              best = v;
              best_w = trial;
              improved = true;
            }
          }
        }
      }
    }
  };
  double overall = std::numeric_limits<double>::infinity();
  for (auto& [face, seed] : seeds) {
    auto [best, best_w] = seed;
    // inside the face first, so the seed is not pulled into a neighbouring basin
    refine(best, best_w, face);
    overall = std::min(overall, best);
    refine(best, best_w, ~0u);
    overall = std::min(overall, best);
  }
  return overall;
}

PointCloud cell_representatives(const PointCloud& cloud, int n) {
  if (n < 1) throw std::invalid_argument("cell count must be positive");
  if (cloud.dim() != 1) throw std::invalid_argument("cell representatives need a one-dimensional cloud");
  std::map<long, double> rep;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double x = cloud.points()(i, 0);
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("points must lie in [0,1)");
    const long cell = std::min<long>(n - 1, static_cast<long>(std::floor(x * n)));
    auto [it, fresh] = rep.try_emplace(cell, x);
    if (!fresh) it->second = std::min(it->second, x);
  }
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(rep.size()), 1);
  Eigen::Index row = 0;
  for (const auto& [cell, x] : rep) pts(row++, 0) = x;
  std::ostringstream label;
  label << "cells(" << cloud.label() << ",n=" << n << ")";
  return PointCloud(pts, std::max(cloud.resolution(), 1.0 / n), label.str());
}

PointCloud make_set(const Config& config) {
  const std::string kind = config.get("set");
  if (kind == "cantor") return gen_cantor(config.get_double("ratio"), static_cast<int>(config.get_long("level")));
  if (kind == "interval") return interval_cloud(config.get_long("points"));
  if (kind == "point") return PointCloud(Eigen::MatrixXd::Zero(1, 1), 1.0, "point");
  if (kind == "dust") {
    return gen_ifs(corner_dust_ifs(config.get_double("ratio")), static_cast<int>(config.get_long("level")));
  }
  if (kind == "cantor_product") {
    const PointCloud c = gen_cantor(config.get_double("ratio"), static_cast<int>(config.get_long("level")));
    return product(c, c);
  }
  throw ConfigError("unknown set '" + kind + "' (cantor, interval, point, dust, cantor_product)");
}

std::optional<double> analytic_dimension(const Config& config) {
  const std::string kind = config.get("set");
  if (kind == "interval") return 1.0;
  if (kind == "point") return 0.0;
  if (kind == "cantor") return std::log(2.0) / std::log(1.0 / config.get_double("ratio"));
  if (kind == "cantor_product") return 2.0 * std::log(2.0) / std::log(1.0 / config.get_double("ratio"));
  if (kind == "dust") return std::min(2.0, std::log(4.0) / std::log(1.0 / config.get_double("ratio")));
  return std::nullopt;
}

ScaleSchedule configured_schedule(const Config& config, const PointCloud& cloud) {
  double base = 2.0;
  if (config.has("base") && config.get("base") != "auto") {
    base = config.get_double("base");
  } else {
    const std::string kind = config.get("set");
    if (kind == "cantor" || kind == "dust" || kind == "cantor_product") base = 1.0 / config.get_double("ratio");
  }
  const int margin = config.has("margin") ? static_cast<int>(config.get_long("margin")) : 2;
  const double top = config.has("top") ? config.get_double("top") : 0.25;
  return default_schedule(cloud, base, margin, top);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "verify_z2",        "verify_entropy_identity", "profile_curve",
      "verify_main_theorem", "verify_fbm_theorem",   "verify_lb1",
      "verify_sandwich",  "verify_projection",       "verify_fbm_covariance"};
  return names;
}

Config default_config(const std::string& experiment) {
  Config c = shared_defaults();
  c.set("experiment", experiment);
  if (experiment == "verify_z2") {
    c.set("triples", "80");
    c.set("max_points", "40");
    c.set("orders", "0.3,0.5,1,1.5,2,3,inf");
    c.set("grid_budget", "10000");
    c.set("grid_max_points", "6");
    c.set("tol_gap", "2e-6");
    c.set("tol_grid", "1e-3");
  } else if (experiment == "verify_entropy_identity") {
    c.set("clouds", "12");
    c.set("scales", "10");
    c.set("min_points", "4");
    c.set("max_points", "12");
    c.set("tol", "1e-4");
  } else if (experiment == "profile_curve") {
    c.set("set", "cantor");
    c.set("ratio", "0.3333333333333333");
    c.set("level", "10");
    c.set("points", "1024");
    c.set("base", "auto");
    c.set("margin", "2");
    c.set("orders", "0.2,0.4,0.63,1,2,inf");
    c.set("tol", "0.07");
    c.set("tol_collapse", "0.05");
  } else if (experiment == "verify_main_theorem") {
    c.set("ratios", "0.3333333333333333,0.2");
    c.set("level", "10");
    c.set("margin", "2");
    c.set("orders", "0.3,0.4307,0.6309,1.5,inf");
    c.set("quantile", "0.05");
    c.set("tol", "0.1");
  } else if (experiment == "verify_fbm_theorem") {
    c.set("set", "cantor");
    c.set("ratio", "0.3333333333333333");
    c.set("level", "7");
    c.set("points", "1024");
    c.set("base", "auto");
    c.set("margin", "2");
    c.set("n", "32768");
    c.set("d", "1");
    c.set("hurst", "0.3,0.7");
    c.set("method", "circulant");
    c.set("replicates", "10");
    c.set("image_base", "2");
    c.set("image_scales", "5");
    c.set("tol", "0.1");
    c.set("tol_self", "0.12");
  } else if (experiment == "verify_lb1") {
    c.set("set", "cantor");
    c.set("ratio", "0.3333333333333333");
    c.set("level", "8");
    c.set("points", "1024");
    c.set("n", "32768");
    c.set("d", "2");
    c.set("hurst", "0.5");
    c.set("method", "circulant");
    c.set("replicates", "20");
    c.set("first_scale", "1");
    c.set("scales", "6");
    c.set("tol_slope", "0.15");
  } else if (experiment == "verify_sandwich") {
    c.set("set", "cantor");
    c.set("ratio", "0.3333333333333333");
    c.set("level", "6");
    c.set("points", "1024");
    c.set("n", "27");
    c.set("fine_factor", "9");
    c.set("orders", "0.5,1,2");
    c.set("samples", "100");
    c.set("tol", "1e-6");
  } else if (experiment == "verify_projection") {
    c.set("set", "cantor_product");
    c.set("ratio", "0.3333333333333333");
    c.set("level", "5");
    c.set("points", "1024");
    c.set("base", "2");
    c.set("margin", "2");
    c.set("directions", "20");
    c.set("projection_base", "2");
    c.set("order", "1");
    c.set("tol", "0.12");
  } else if (experiment == "verify_fbm_covariance") {
    c.set("hurst", "0.3,0.5,0.7");
    c.set("n", "1024");
    c.set("method", "circulant");
    c.set("replicates", "2000");
    c.set("grid", "10");
    c.set("z_max", "4");
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  return c;
}

ExperimentReport run_experiment(const std::string& experiment, Config config) {
  config.merge_defaults(default_config(experiment));
  config.set("experiment", experiment);
  static const std::map<std::string, ExperimentReport (*)(const Config&)> table = {
      {"verify_z2", run_verify_z2},
      {"verify_entropy_identity", run_verify_entropy_identity},
      {"profile_curve", run_profile_curve},
      {"verify_main_theorem", run_verify_main_theorem},
      {"verify_fbm_theorem", run_verify_fbm_theorem},
      {"verify_lb1", run_verify_lb1},
      {"verify_sandwich", run_verify_sandwich},
      {"verify_projection", run_verify_projection},
      {"verify_fbm_covariance", run_verify_fbm_covariance}};
  return table.at(experiment)(config);
}

// game duality --------------------------------------------------------------

ExperimentReport run_verify_z2(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_z2", config);
  const SolverOptions opt = solver_options(config);
  const auto orders = config.get_orders("orders");
  const long triples = config.get_long("triples");
  const long max_points = config.get_long("max_points");
  const long grid_budget = config.get_long("grid_budget");
  const long grid_max = config.get_long("grid_max_points");
  GaussianStream g(config.get_u64("seed"), 0);

  Table t{"triples", {"index", "kind", "k", "dim", "r", "s", "value", "I", "J", "gap", "converged", "exact",
                      "oracle", "oracle_deviation"}, {}};
  double max_gap = 0.0;
  double max_dev = 0.0;
  long unconverged = 0;
  long oracle_count = 0;

  auto run = [&](const std::string& kind, const PointCloud& cloud, double r, const KernelOrder& s,
                 std::optional<double> closed_form) {
    const long index = static_cast<long>(t.rows.size());
    GameSolution sol;
    try {
      sol = z_value(cloud, r, s, opt);
    } catch (const std::exception& e) {
      report.errors.push_back("triple " + std::to_string(index) + ": " + e.what());
      ++unconverged;
      return;
    }
    const WeightedMeasure mu = solution_measure(cloud, sol);
    const double I = functional_I(s, mu, r);
    const double J = functional_J(s, mu, r);
    const double gap = J - I;
    if (sol.converged) {
      max_gap = std::max(max_gap, gap);
    } else {
      ++unconverged;
      report.errors.push_back("triple " + std::to_string(index) + " did not converge");
    }
    double oracle = kNaN;
    if (closed_form) {
      oracle = *closed_form;
    } else if (cloud.size() <= grid_max) {
      oracle = simplex_grid_minimum(kernel_matrix(cloud, r, s).entries, grid_budget);
    }
    double dev = kNaN;
    if (!std::isnan(oracle)) {
      dev = std::abs(sol.value - oracle);
      max_dev = std::max(max_dev, dev);
      ++oracle_count;
    }
    t.add({static_cast<double>(index), kind, static_cast<double>(cloud.size()),
           static_cast<double>(cloud.dim()), r, order_cell(s), sol.value, I, J, gap,
           sol.converged ? 1.0 : 0.0, sol.exact ? 1.0 : 0.0, oracle, dev});
  };

  // two-point games: value (1 + a) / 2 with a the off-diagonal kernel entry
  for (int i = 0; i < 5; ++i) {
    const double gap = 0.1 + 0.9 * g.uniform();
    const double r = gap * std::exp(std::log(4.0) * (2.0 * g.uniform() - 1.0));
    const KernelOrder& s = orders[static_cast<std::size_t>(uniform_int(g, 0, static_cast<long>(orders.size()) - 1))];
    Eigen::MatrixXd x(2, 1);
    x << 0.0, gap;
    const double a = psi_of_norm(s, gap / r);
    run("two_point", PointCloud(x, 1e-9, "two-point"), r, s, 0.5 * (1.0 + a));
  }
  // identity regime: indicator kernel far below the smallest gap
  for (int i = 0; i < 3; ++i) {
    const PointCloud cloud = random_cloud(g, uniform_int(g, 2, max_points), 1 + (i % 2), "random");
    run("identity", cloud, 0.1 * min_gap(cloud), KernelOrder::infinity(),
        1.0 / static_cast<double>(cloud.size()));
  }
  // 5 two-point, 3 identity and 4 Cantor triples around the random ones
  for (long next = 0; next < std::max(0L, triples - 12); ++next) {
    const Eigen::Index k = uniform_int(g, 2, max_points);
    const Eigen::Index dim = 1 + (next % 2);
    const PointCloud cloud = random_cloud(g, k, dim, "random");
    const double r = cloud.diameter() * std::exp(std::log(0.02) * g.uniform());
    const KernelOrder& s = orders[static_cast<std::size_t>(uniform_int(g, 0, static_cast<long>(orders.size()) - 1))];
    run("random", cloud, r, s, std::nullopt);
  }
  // a Cantor cloud across its own scales
  const PointCloud cantor = gen_cantor(1.0 / 3.0, 4);
  for (int j = 1; j <= 4; ++j) run("cantor", cantor, std::pow(3.0, -j), KernelOrder::finite(1.0), std::nullopt);

  report.tables.push_back(std::move(t));
  report.checks.push_back(at_least("triples", static_cast<double>(report.tables[0].rows.size()), 50.0));
  report.checks.push_back(at_most("unconverged", static_cast<double>(unconverged), 0.0));
  report.checks.push_back(at_most("max_certificate_gap", max_gap, config.get_double("tol_gap"),
                                  "J - I over converged solutions"));
  report.checks.push_back(at_most("max_oracle_deviation", max_dev, config.get_double("tol_grid"),
                                  std::to_string(oracle_count) + " instances with k <= " +
                                      std::to_string(grid_max) + " or a closed form"));
  report.wall_seconds = clock.seconds();
  return report;
}

// entropy identity ----------------------------------------------------------

ExperimentReport run_verify_entropy_identity(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_entropy_identity", config);
  SolverOptions opt = solver_options(config);
  const long clouds = config.get_long("clouds");
  const long scales = config.get_long("scales");
  const long lo = config.get_long("min_points");
  const long hi = config.get_long("max_points");
  if (hi > kMaxExactEntropyPoints) throw ConfigError("max_points is limited to 24");
  opt.exact_limit = std::max<Eigen::Index>(opt.exact_limit, hi);
  GaussianStream g(config.get_u64("seed"), 0);

  Table t{"pairs", {"cloud", "k", "dim", "r", "inverse_z", "n_half", "deviation", "exact"}, {}};
  double worst = 0.0;
  auto check_pair = [&](long id, const PointCloud& cloud, double r) {
    const GameSolution sol = z_value(cloud, r, KernelOrder::infinity(), opt);
    const long count = entropy_number(cloud, r / 2.0, EntropyMode::exact);
    const double dev = std::abs(sol.n_value() - static_cast<double>(count));
    worst = std::max(worst, dev);
    t.add({static_cast<double>(id), static_cast<double>(cloud.size()), static_cast<double>(cloud.dim()), r,
           sol.n_value(), static_cast<double>(count), dev, sol.exact ? 1.0 : 0.0});
  };

  for (long c = 0; c < clouds; ++c) {
    const PointCloud cloud = random_cloud(g, uniform_int(g, lo, hi), 1 + (c % 2), "random");
    const std::vector<double> d = pairwise_distances(cloud);
    for (long j = 0; j < scales; ++j) {
      // midpoints between consecutive distances, plus exact ties every third scale
      const auto i = static_cast<std::size_t>(uniform_int(g, 0, static_cast<long>(d.size()) - 1));
      double r = d[i];
      if (j % 3 != 0) r = i + 1 < d.size() ? 0.5 * (d[i] + d[i + 1]) : 1.5 * d[i];
      check_pair(c, cloud, r);
    }
  }
  const PointCloud cantor = gen_cantor(1.0 / 3.0, 3);
  for (int j = 0; j <= 4; ++j) check_pair(clouds, cantor, std::pow(3.0, -j));

  report.tables.push_back(std::move(t));
  report.checks.push_back(at_least("pairs", static_cast<double>(report.tables[0].rows.size()), 100.0));
  report.checks.push_back(at_most("max_deviation", worst, config.get_double("tol"),
                                  "|1/Z_inf(r) - N_{r/2}|, exact packing count"));
  report.wall_seconds = clock.seconds();
  return report;
}

// profile curve -----------------------------------------------------------

namespace {

/// Slope of log I_s(r) under the uniform measure against log r.
double uniform_measure_slope(const PointCloud& cloud, const KernelOrder& s, const ScaleSchedule& schedule) {
  const WeightedMeasure mu = WeightedMeasure::uniform(cloud);
  std::vector<double> x;
  std::vector<double> y;
  for (double r : schedule.scales()) {
    x.push_back(std::log(r));
    y.push_back(std::log(functional_I(s, mu, r)));
  }
  return fit_slope(x, y).slope;
}

}  // namespace

ExperimentReport run_profile_curve(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("profile_curve", config);
  const PointCloud cloud = make_set(config);
  const auto orders = config.get_orders("orders");
  const auto dim = analytic_dimension(config);
  const double tol = config.get_double("tol");
  const double tol_collapse = config.get_double("tol_collapse");

  Table curve_t{"curve", {"s", "estimate", "stderr", "r2", "uniform_slope", "target"}, {}};
  Table scales_t{"scales", {"s", "r", "z"}, {}};

  if (cloud.size() == 1) {
    for (const auto& s : orders) curve_t.add({order_cell(s), 0.0, 0.0, 1.0, 0.0, 0.0});
    report.notes.push_back("single point: N_r = 1 and Z_s(r) = 1 at every scale");
    report.tables.push_back(std::move(curve_t));
    report.checks.push_back(at_most("max_estimate", 0.0, 0.0));
    report.wall_seconds = clock.seconds();
    return report;
  }

  const ScaleSchedule schedule = configured_schedule(config, cloud);
  const ProfileCurve curve = profile_curve(cloud, orders, schedule, solver_options(config));
  const ProfileEstimate box = box_dimension(cloud, schedule);

  for (const auto& e : curve.estimates) {
    const double target = dim ? std::min(e.order->value(), *dim) : kNaN;
    curve_t.add({order_cell(*e.order), e.estimate, e.fit.stderr_slope, e.fit.r_squared,
                 uniform_measure_slope(cloud, *e.order, schedule), target});
    for (std::size_t i = 0; i < e.scales.size(); ++i) scales_t.add({order_cell(*e.order), e.scales[i], e.values[i]});
    if (dim) {
      report.checks.push_back(at_most("profile_s=" + e.order->to_string(), std::abs(e.estimate - target), tol,
                                      "estimate " + fmt(e.estimate) + " vs min(s, D) = " + fmt(target)));
    }
    if (e.order->value() >= static_cast<double>(cloud.dim())) {
      report.checks.push_back(at_most("collapse_s=" + e.order->to_string(), std::abs(e.estimate - box.estimate),
                                      tol_collapse,
                                      "box_profile " + fmt(e.estimate) + " vs box_dimension " + fmt(box.estimate)));
    }
  }
  Table box_t{"box_dimension", {"r", "count"}, {}};
  for (std::size_t i = 0; i < box.scales.size(); ++i) box_t.add({box.scales[i], box.values[i]});
  Table summary{"summary", {"box_dimension", "box_stderr", "analytic_dimension"}, {}};
  summary.add({box.estimate, box.fit.stderr_slope, dim ? *dim : kNaN});

  report.checks.push_back(at_most("monotonicity_violations", static_cast<double>(curve.violations.size()), 0.0));
  for (const auto& v : curve.violations) report.notes.push_back(v);
  report.notes.push_back(kRegularityNote);
  report.tables.push_back(std::move(curve_t));
  report.tables.push_back(std::move(scales_t));
  report.tables.push_back(std::move(box_t));
  report.tables.push_back(std::move(summary));
  report.wall_seconds = clock.seconds();
  return report;
}

// packing profile vs dimension profile --------------------------------------

ExperimentReport run_verify_main_theorem(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_main_theorem", config);
  const auto ratios = config.get_doubles("ratios");
  const auto orders = config.get_orders("orders");
  const int level = static_cast<int>(config.get_long("level"));
  const int margin = static_cast<int>(config.get_long("margin"));
  const double quantile = config.get_double("quantile");
  const double tol = config.get_double("tol");
  const SolverOptions opt = solver_options(config);

  Table t{"profiles", {"ratio", "s", "box_profile", "fh_profile", "difference", "box_stderr", "fh_stderr",
                       "target"}, {}};
  for (double ratio : ratios) {
    const PointCloud cloud = gen_cantor(ratio, level);
    const ScaleSchedule schedule = default_schedule(cloud, 1.0 / ratio, margin);
    const WeightedMeasure mu = WeightedMeasure::uniform(cloud);
    const double dim = std::log(2.0) / std::log(1.0 / ratio);
    for (const auto& s : orders) {
      const ProfileEstimate b = box_profile(cloud, s, schedule, opt);
      const ProfileEstimate f = fh_profile(mu, s, schedule, quantile);
      const double diff = std::abs(b.estimate - f.estimate);
      t.add({ratio, order_cell(s), b.estimate, f.estimate, diff, b.fit.stderr_slope, f.fit.stderr_slope,
             std::min(s.value(), dim)});
      report.checks.push_back(at_most("ratio=" + fmt(ratio) + ",s=" + s.to_string(), diff, tol,
                                      "box_profile " + fmt(b.estimate) + ", fh_profile " + fmt(f.estimate)));
    }
  }
  report.notes.push_back(kRegularityNote);
  report.tables.push_back(std::move(t));
  report.wall_seconds = clock.seconds();
  return report;
}

// fBM images ----------------------------------------------------------------

namespace {

/// Dyadic scales from a quarter of the image diameter downward.
ScaleSchedule image_schedule(const PointCloud& image, double base, long count) {
  std::vector<double> s;
  for (long j = 0; j < count; ++j) s.push_back(image.diameter() / 4.0 * std::pow(base, -static_cast<double>(j)));
  return ScaleSchedule(std::move(s));
}

}  // namespace

ExperimentReport run_verify_fbm_theorem(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_fbm_theorem", config);
  const PointCloud set = make_set(config);
  const auto dim = analytic_dimension(config);
  const long n = config.get_long("n");
  const int d = static_cast<int>(config.get_long("d"));
  const long replicates = config.get_long("replicates");
  const FbmMethod method = parse_fbm_method(config.get("method"));
  const double image_base = config.get_double("image_base");
  const long image_scales = config.get_long("image_scales");
  const std::uint64_t seed = config.get_u64("seed");
  if (n < (1L << 15)) report.notes.push_back("grid below 2^15 points: outside the documented regime");
  if (replicates < 10) report.notes.push_back("fewer than 10 replicates: outside the documented regime");

  Table reps{"replicates", {"hurst", "replicate", "seed", "estimate", "stderr", "r2", "points"}, {}};
  Table summary{"summary", {"hurst", "median", "target", "self_consistent", "box_profile_at_hd", "replicates"}, {}};
  for (double hurst : config.get_doubles("hurst")) {
    std::vector<double> estimates;
    for (long r = 0; r < replicates; ++r) {
      const std::uint64_t s = replicate_seed(seed, r);
      try {
        const FbmPath path = simulate(n, d, hurst, s, method);
        const PointCloud image = image_cloud(path, set);
        double estimate = 0.0;
        SlopeFit fit;
        if (image.size() > 1) {
          const ProfileEstimate b = box_dimension(image, image_schedule(image, image_base, image_scales));
          estimate = b.estimate;
          fit = b.fit;
        }
        estimates.push_back(estimate);
        reps.add({hurst, static_cast<double>(r), static_cast<double>(s), estimate, fit.stderr_slope, fit.r_squared,
                  static_cast<double>(image.size())});
      } catch (const std::exception& e) {
        report.errors.push_back("H=" + fmt(hurst) + " replicate " + std::to_string(r) + ": " + e.what());
      }
    }
    const double med = median(estimates);
    const double target = dim ? std::min(static_cast<double>(d), *dim / hurst) : kNaN;
    double profile = 0.0;
    if (set.size() > 1) {
      profile = box_profile(set, KernelOrder::finite(hurst * d), configured_schedule(config, set),
                            solver_options(config))
                    .estimate;
    }
    const double self = profile / hurst;
    summary.add({hurst, med, target, self, profile, static_cast<double>(estimates.size())});
    report.checks.push_back(at_least("replicates_H=" + fmt(hurst), static_cast<double>(estimates.size()),
                                     static_cast<double>(replicates)));
    if (dim) {
      report.checks.push_back(at_most("analytic_H=" + fmt(hurst), std::abs(med - target), config.get_double("tol"),
                                      "median " + fmt(med) + " vs min(d, D/H) = " + fmt(target)));
    }
    report.checks.push_back(at_most("self_consistent_H=" + fmt(hurst), std::abs(med - self),
                                    config.get_double("tol_self"),
                                    "median " + fmt(med) + " vs box_profile(E, Hd) / H = " + fmt(self)));
  }
  report.notes.push_back(kRegularityNote);
  report.tables.push_back(std::move(reps));
  report.tables.push_back(std::move(summary));
  report.wall_seconds = clock.seconds();
  return report;
}

ExperimentReport run_verify_lb1(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_lb1", config);
  const PointCloud set = make_set(config);
  const long n = config.get_long("n");
  const int d = static_cast<int>(config.get_long("d"));
  const double hurst = config.get_doubles("hurst").at(0);
  const long replicates = config.get_long("replicates");
  const FbmMethod method = parse_fbm_method(config.get("method"));
  const std::uint64_t seed = config.get_u64("seed");
  const SolverOptions opt = solver_options(config);
  const double ratio = config.has("ratio") ? config.get_double("ratio") : 0.5;
  const long first = config.get_long("first_scale");
  const long count = config.get_long("scales");

  // parameter scales t_j and image scales r_j = t_j^H
  std::vector<double> t_scales;
  for (long j = first; j < first + count; ++j) t_scales.push_back(std::pow(ratio, static_cast<double>(j)));
  std::vector<double> r_scales;
  for (double t : t_scales) r_scales.push_back(std::pow(t, hurst));

  std::vector<double> mean_z(t_scales.size(), 0.0);
  long used = 0;
  long unconverged = 0;
  Table reps{"replicates", {"replicate", "r", "z_inf"}, {}};
  for (long rep = 0; rep < replicates; ++rep) {
    try {
      const FbmPath path = simulate(n, d, hurst, replicate_seed(seed, rep), method);
      const PointCloud image = image_cloud(path, set);
      std::vector<double> z(t_scales.size());
      for (std::size_t j = 0; j < r_scales.size(); ++j) {
        const GameSolution sol = z_value(image, r_scales[j], KernelOrder::infinity(), opt);
        if (!sol.converged) ++unconverged;
        z[j] = sol.value;
      }
      for (std::size_t j = 0; j < z.size(); ++j) {
        mean_z[j] += z[j];
        reps.add({static_cast<double>(rep), r_scales[j], z[j]});
      }
      ++used;
    } catch (const std::exception& e) {
      report.errors.push_back("replicate " + std::to_string(rep) + ": " + e.what());
    }
  }
  Table ratios{"ratios", {"t", "r", "mean_z_inf_image", "z_hd_set", "ratio"}, {}};
  std::vector<double> x;
  std::vector<double> y;
  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < t_scales.size(); ++j) {
    mean_z[j] /= static_cast<double>(std::max(used, 1L));
    const double zset = z_value(set, t_scales[j], KernelOrder::finite(hurst * d), opt).value;
    const double q = mean_z[j] / zset;
    ratios.add({t_scales[j], r_scales[j], mean_z[j], zset, q});
    max_ratio = std::max(max_ratio, q);
    min_ratio = std::min(min_ratio, q);
    x.push_back(std::log(r_scales[j]));
    y.push_back(std::log(q));
  }
  const SlopeFit fit = fit_slope(x, y);
  Table summary{"summary", {"slope", "stderr", "empirical_k", "replicates", "unconverged_solves"}, {}};
  summary.add({fit.slope, fit.stderr_slope, max_ratio, static_cast<double>(used), static_cast<double>(unconverged)});
  report.checks.push_back(at_least("replicates", static_cast<double>(used), static_cast<double>(replicates)));
  report.checks.push_back(at_least("min_ratio", min_ratio, std::numeric_limits<double>::min(), "ratio positive"));
  report.checks.push_back(at_most("abs_log_ratio_slope", std::abs(fit.slope), config.get_double("tol_slope"),
                                  "slope " + fmt(fit.slope) + ", empirical K " + fmt(max_ratio)));
  if (unconverged > 0) {
    report.notes.push_back(std::to_string(unconverged) + " image solves stopped before the tolerance");
  }
  report.tables.push_back(std::move(reps));
  report.tables.push_back(std::move(ratios));
  report.tables.push_back(std::move(summary));
  report.wall_seconds = clock.seconds();
  return report;
}

// sandwich ----------------------------------------------------------------

ExperimentReport run_verify_sandwich(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_sandwich", config);
  const PointCloud set = make_set(config);
  const int n = static_cast<int>(config.get_long("n"));
  const int factor = static_cast<int>(config.get_long("fine_factor"));
  const long samples = config.get_long("samples");
  const double tol = config.get_double("tol");
  const SolverOptions base_opt = solver_options(config);
  GaussianStream g(config.get_u64("seed"), 0);

  const PointCloud coarse = cell_representatives(set, n);
  const PointCloud fine = cell_representatives(set, n * factor);
  const double r = 1.0 / n;

  // index of each coarse representative inside the fine cloud
  std::vector<Eigen::Index> embed;
  for (Eigen::Index i = 0; i < coarse.size(); ++i) {
    for (Eigen::Index j = 0; j < fine.size(); ++j) {
      if (fine.points()(j, 0) == coarse.points()(i, 0)) embed.push_back(j);
    }
  }
  if (static_cast<Eigen::Index>(embed.size()) != coarse.size()) {
    throw std::logic_error("coarse representatives are not fine representatives");
  }

  Table t{"sandwich", {"s", "z_coarse", "lower", "z_fine", "lower_slack", "upper_slack"}, {}};
  Table c{"coarsening", {"s", "sample", "i_mu", "i_nu", "slack"}, {}};
  for (const auto& s : config.get_orders("orders")) {
    const GameSolution zc = z_value(coarse, r, s, base_opt);
    SolverOptions opt = base_opt;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(fine.size());
    for (std::size_t i = 0; i < embed.size(); ++i) warm(embed[i]) = zc.weights(static_cast<Eigen::Index>(i));
    opt.warm_start = warm;
    const GameSolution zf = z_value(fine, r, s, opt);
    const double lower = std::pow(3.0, -s.value()) * zc.value;
    t.add({order_cell(s), zc.value, lower, zf.value, zf.value - lower, zc.value + tol - zf.value});
    report.checks.push_back(at_least("lower_s=" + s.to_string(), zf.value - lower, 0.0,
                                     "3^-s Z_coarse = " + fmt(lower) + ", fine value " + fmt(zf.value)));
    report.checks.push_back(at_most("upper_s=" + s.to_string(), zf.value - zc.value, tol,
                                    "fine value " + fmt(zf.value) + ", Z_coarse " + fmt(zc.value)));

    double worst = std::numeric_limits<double>::infinity();
    for (long m = 0; m < samples; ++m) {
      // random support and exponential weights on the fine cloud
      std::vector<double> xs;
      std::vector<double> ws;
      const double keep = 0.2 + 0.8 * g.uniform();
      for (Eigen::Index i = 0; i < fine.size(); ++i) {
        if (g.uniform() < keep || (i == fine.size() - 1 && xs.empty())) {
          xs.push_back(fine.points()(i, 0));
          ws.push_back(-std::log(1.0 - g.uniform()));
        }
      }
      Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
      w /= w.sum();
      const WeightedMeasure mu(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())), w);
      const WeightedMeasure nu = coarsen_measure(mu, n, fine);
      const double imu = functional_I(s, mu, r);
      const double inu = functional_I(s, nu, r);
      const double slack = imu - std::pow(3.0, -s.value()) * inu;
      worst = std::min(worst, slack);
      c.add({order_cell(s), static_cast<double>(m), imu, inu, slack});
    }
    report.checks.push_back(at_least("coarsening_s=" + s.to_string(), worst, -1e-12,
                                     std::to_string(samples) + " random measures"));
  }
  report.notes.push_back("coarse cloud: smallest point of E in each cell of width 1/n; fine cloud: the same with "
                         "cells of width 1/(" + std::to_string(factor) + "n); the fine solve is warm-started "
                         "from the embedded coarse optimum");
  report.tables.push_back(std::move(t));
  report.tables.push_back(std::move(c));
  report.wall_seconds = clock.seconds();
  return report;
}

// projections ---------------------------------------------------------------

ExperimentReport run_verify_projection(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_projection", config);
  const PointCloud set = make_set(config);
  if (set.dim() != 2) throw ConfigError("projection experiment needs a planar set");
  const long directions = config.get_long("directions");
  const double proj_base = config.get_double("projection_base");
  const int margin = static_cast<int>(config.get_long("margin"));
  const KernelOrder order = KernelOrder::parse(config.get("order"));
  GaussianStream g(config.get_u64("seed"), 0);

  Table t{"directions", {"theta", "estimate", "stderr", "r2", "points"}, {}};
  std::vector<double> estimates;
  for (long i = 0; i < directions; ++i) {
    const double theta = std::acos(-1.0) * g.uniform();
    const PointCloud proj = project(set, unit_direction(theta));
    const ProfileEstimate b = box_dimension(proj, default_schedule(proj, proj_base, margin));
    estimates.push_back(b.estimate);
    t.add({theta, b.estimate, b.fit.stderr_slope, b.fit.r_squared, static_cast<double>(proj.size())});
  }
  const ScaleSchedule schedule = configured_schedule(config, set);
  const ProfileEstimate bp = box_profile(set, order, schedule, solver_options(config));
  const ProfileEstimate fh = fh_profile(WeightedMeasure::uniform(set), order, schedule);
  const double med = median(estimates);
  const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
  Table summary{"summary", {"median", "min", "max", "box_profile", "fh_profile"}, {}};
  summary.add({med, *lo, *hi, bp.estimate, fh.estimate});
  report.checks.push_back(at_least("directions", static_cast<double>(estimates.size()), 20.0));
  report.checks.push_back(at_most("median_vs_profile", std::abs(med - bp.estimate), config.get_double("tol"),
                                  "median " + fmt(med) + " vs box_profile(s=" + order.to_string() + ") " +
                                      fmt(bp.estimate)));
  report.notes.push_back(kRegularityNote);
  report.tables.push_back(std::move(t));
  report.tables.push_back(std::move(summary));
  report.wall_seconds = clock.seconds();
  return report;
}

// fBM covariance ------------------------------------------------------------

ExperimentReport run_verify_fbm_covariance(const Config& config) {
  const Stopwatch clock;
  ExperimentReport report = start_report("verify_fbm_covariance", config);
  const long n = config.get_long("n");
  const long replicates = config.get_long("replicates");
  const long grid = config.get_long("grid");
  const FbmMethod method = parse_fbm_method(config.get("method"));
  const double z_max = config.get_double("z_max");
  const std::uint64_t seed = config.get_u64("seed");

  std::vector<long> idx;
  for (long a = 1; a <= grid; ++a) idx.push_back(std::max(1L, std::lround(static_cast<double>(a * n) / grid)));
  const auto m = static_cast<Eigen::Index>(idx.size());

  Table t{"covariance", {"hurst", "s", "t", "empirical", "exact", "z", "cross_z"}, {}};
  for (double hurst : config.get_doubles("hurst")) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd crosssq = Eigen::MatrixXd::Zero(m, m);
    for (long rep = 0; rep < replicates; ++rep) {
      const FbmPath path = simulate(n, 2, hurst, replicate_seed(seed, rep), method);
      Eigen::VectorXd a(m);
      Eigen::VectorXd b(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        a(i) = path.values(idx[static_cast<std::size_t>(i)], 0);
        b(i) = path.values(idx[static_cast<std::size_t>(i)], 1);
      }
      const Eigen::MatrixXd p = a * a.transpose();
      const Eigen::MatrixXd q = a * b.transpose();
      sum += p;
      sumsq += p.cwiseProduct(p);
      cross += q;
      crosssq += q.cwiseProduct(q);
    }
    const auto R = static_cast<double>(replicates);
    double worst = 0.0;
    double worst_cross = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const double s = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(n);
        const double u = static_cast<double>(idx[static_cast<std::size_t>(j)]) / static_cast<double>(n);
        const double mean = sum(i, j) / R;
        const double se = std::sqrt(std::max(sumsq(i, j) / R - mean * mean, 0.0) / R);
        const double exact = fbm_covariance(hurst, s, u);
        const double z = (mean - exact) / se;
        const double cmean = cross(i, j) / R;
        const double cse = std::sqrt(std::max(crosssq(i, j) / R - cmean * cmean, 0.0) / R);
        const double cz = cmean / cse;
        worst = std::max(worst, std::abs(z));
        worst_cross = std::max(worst_cross, std::abs(cz));
        t.add({hurst, s, u, mean, exact, z, cz});
      }
    }
    report.checks.push_back(at_most("max_abs_z_H=" + fmt(hurst), worst, z_max));
    report.checks.push_back(at_most("max_abs_cross_z_H=" + fmt(hurst), worst_cross, z_max));
    if (hurst == 0.5) {
      double largest = 0.0;
      for (long k = 1; k < n; ++k) {
        largest = std::max(largest, std::abs(fgn_autocovariance(hurst, 1.0 / static_cast<double>(n), k)));
      }
      report.checks.push_back(at_most("brownian_increment_covariance", largest, 0.0, "max |gamma(k)|, k >= 1"));
    }
  }
  report.tables.push_back(std::move(t));
  report.wall_seconds = clock.seconds();
  return report;
}

// reports -------------------------------------------------------------------

namespace {

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double x = std::get<double>(c);
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string cell_csv(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double x = std::get<double>(c);
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string report_json(const ExperimentReport& report) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["artifact_version"] = kArtifactVersion;
  j["experiment"] = report.experiment;
  j["config"] = report.config.entries();
  j["config_hash"] = report.config.hash();
  j["passed"] = report.passed();
  j["wall_seconds"] = report.wall_seconds;
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", cell_json(c.value)},
                           {"relation", c.relation == Check::Relation::at_most ? "<=" : ">="},
                           {"limit", cell_json(c.limit)},
                           {"pass", c.pass()},
                           {"detail", c.detail}});
  }
  j["tables"] = json::object();
  for (const auto& t : report.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      rows.push_back(std::move(r));
    }
    j["tables"][t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  j["notes"] = report.notes;
  j["errors"] = report.errors;
  return j.dump(2);
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "both") return ReportFormat::both;
  throw ConfigError("unknown report format '" + text + "' (json, csv, both)");
}

std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format) {
  const std::filesystem::path dir = report.config.has("output_dir") ? report.config.get("output_dir") : "reports";
  std::filesystem::create_directories(dir);
  const std::string stem = report.experiment + "-" + report.config.hash();
  std::vector<std::string> written;
  if (format != ReportFormat::csv) {
    const auto path = dir / (stem + ".json");
    write_atomic(path, report_json(report) + "\n");
    written.push_back(path.string());
  }
  if (format != ReportFormat::json) {
    auto emit_table = [&](const std::string& name, const std::vector<std::string>& columns,
                          const std::vector<std::vector<Cell>>& rows) {
      std::ostringstream os;
      for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
      os << '\n';
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
        os << '\n';
      }
      const auto path = dir / (stem + "-" + name + ".csv");
      write_atomic(path, os.str());
      written.push_back(path.string());
    };
    for (const auto& t : report.tables) emit_table(t.name, t.columns, t.rows);
    std::vector<std::vector<Cell>> rows;
    for (const auto& c : report.checks) {
      rows.push_back({c.name, c.value, std::string(c.relation == Check::Relation::at_most ? "<=" : ">="), c.limit,
                      std::string(c.pass() ? "pass" : "fail")});
    }
    emit_table("checks", {"name", "value", "relation", "limit", "result"}, rows);
  }
  return written;
}

}  // namespace dimprof
