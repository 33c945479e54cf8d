#include "dimprof/profiles.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dimprof {

const char* const kRegularityNote =
    "packing profile taken equal to the box profile: the input is an exactly "
    "self-similar set, so every relatively open piece has the same box profile";

ScaleSchedule::ScaleSchedule(std::vector<double> scales) : scales_(std::move(scales)) {
  if (scales_.size() < 4) throw std::invalid_argument("a schedule needs at least 4 scales");
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (!(scales_[i] > 0.0) || !std::isfinite(scales_[i])) {
      throw std::invalid_argument("scales must be positive");
    }
    if (i == 0) continue;
    const double ratio = scales_[i - 1] / scales_[i];
    if (!(ratio >= 1.2 - 1e-12 && ratio <= 10.0 + 1e-12)) {
      throw std::invalid_argument("consecutive scale ratios must lie in [1.2, 10]");
    }
  }
}

ScaleSchedule ScaleSchedule::geometric(double base, int first, int last) {
  std::vector<double> s;
  for (int j = first; j <= last; ++j) s.push_back(std::pow(base, -j));
  return ScaleSchedule(std::move(s));
}

ScaleSchedule ScaleSchedule::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<double> s = scales_;
  for (auto& r : s) r *= c;
  return ScaleSchedule(std::move(s));
}

ScaleSchedule default_schedule(const PointCloud& cloud, double base, int margin, double top_fraction) {
  if (!(base >= 1.2 && base <= 10.0)) throw std::invalid_argument("schedule base must lie in [1.2, 10]");
  if (margin < 0) throw std::invalid_argument("schedule margin must be nonnegative");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw std::invalid_argument("schedule top must lie in (0, 1]");
  const double top = cloud.diameter() * top_fraction;
  const double bottom = cloud.resolution() * std::pow(base, margin);
  const int first = static_cast<int>(std::ceil(-std::log(top) / std::log(base) - 1e-9));
  const int last = static_cast<int>(std::floor(-std::log(bottom) / std::log(base) + 1e-9));
  if (last - first + 1 < 4) {
    throw std::invalid_argument("cloud spans fewer than 4 scales above its resolution");
  }
  return ScaleSchedule::geometric(base, first, last);
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit inputs differ in length");
  if (x.size() < 4) throw ProfileError("degenerate fit: fewer than 4 scales");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ProfileError("degenerate fit: all abscissae equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += e * e;
  }
  // a flat response is a perfect fit
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
  fit.n_points = static_cast<int>(x.size());
  return fit;
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::box:
      return "box";
    case ProfileKind::box_profile:
      return "box_profile";
    case ProfileKind::fh_profile:
      return "fh_profile";
  }
  return "unknown";
}

namespace {

void require_resolved(const ScaleSchedule& schedule, double resolution) {
  if (schedule.smallest() < resolution * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "schedule reaches " << schedule.smallest() << ", below the cloud resolution "
       << resolution;
    throw ProfileError(os.str());
  }
}

void flag_fit(ProfileEstimate& est) {
  if (est.fit.r_squared < 0.9) {
    std::ostringstream os;
    os << "poor fit: r^2 = " << est.fit.r_squared;
    est.diagnostics.push_back(os.str());
  }
}

void set_range(SlopeFit& fit, const ScaleSchedule& schedule) {
  fit.scale_min = schedule.smallest();
  fit.scale_max = schedule.largest();
}

}  // namespace

ProfileEstimate box_dimension(const PointCloud& cloud, const ScaleSchedule& schedule) {
  require_resolved(schedule, cloud.resolution());
  ProfileEstimate est;
  est.kind = ProfileKind::box;
  std::vector<double> x;
  std::vector<double> y;
  for (double r : schedule.scales()) {
    const long count = entropy_number(cloud, r, EntropyMode::greedy);
    est.scales.push_back(r);
    est.values.push_back(static_cast<double>(count));
    x.push_back(std::log(1.0 / r));
    y.push_back(std::log(static_cast<double>(count)));
  }
  est.fit = fit_slope(x, y);
  set_range(est.fit, schedule);
  est.estimate = std::clamp(est.fit.slope, 0.0, static_cast<double>(cloud.dim()));
  flag_fit(est);
  return est;
}

ProfileEstimate box_profile(const PointCloud& cloud, const KernelOrder& order,
                            const ScaleSchedule& schedule, const SolverOptions& options) {
  require_resolved(schedule, cloud.resolution());
  ProfileEstimate est;
  est.kind = ProfileKind::box_profile;
  est.order = order;
  std::vector<double> x;
  std::vector<double> y;
  for (double r : schedule.scales()) {
    const GameSolution sol = z_value(cloud, r, order, options);
    if (!sol.converged) {
      std::ostringstream os;
      os << "game solver did not converge at r = " << r << " (s = " << order.to_string()
         << "): value " << sol.value << ", residual " << sol.residual << ", off-support slack "
         << sol.off_support_slack << ", iterations " << sol.iterations;
      throw ProfileError(os.str());
    }
    est.scales.push_back(r);
    est.values.push_back(sol.value);
    x.push_back(std::log(r));
    y.push_back(std::log(sol.value));
  }
  est.fit = fit_slope(x, y);
  set_range(est.fit, schedule);
  est.estimate = std::clamp(est.fit.slope, 0.0, static_cast<double>(cloud.dim()));
  est.diagnostics.push_back(kRegularityNote);
  flag_fit(est);
  return est;
}

ProfileEstimate fh_profile(const WeightedMeasure& mu, const KernelOrder& order,
                           const ScaleSchedule& schedule, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) throw std::invalid_argument("quantile must lie in (0,1)");
  ProfileEstimate est;
  est.kind = ProfileKind::fh_profile;
  est.order = order;

  const Eigen::Index k = mu.size();
  const std::size_t m = schedule.size();
  Eigen::MatrixXd logf(k, static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < m; ++c) {
    logf.col(static_cast<Eigen::Index>(c)) =
        support_potentials(order, mu, schedule.scales()[c]).array().log().matrix();
  }
  std::vector<double> x;
  for (double r : schedule.scales()) x.push_back(std::log(r));

  std::vector<SlopeFit> fits(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    std::vector<double> y(m);
    for (std::size_t c = 0; c < m; ++c) y[c] = logf(i, static_cast<Eigen::Index>(c));
    fits[static_cast<std::size_t>(i)] = fit_slope(x, y);
  }

  // mu-weighted lower quantile over points of positive mass
  std::vector<Eigen::Index> order_idx;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (mu.weights()(i) > 0.0) order_idx.push_back(i);
  }
  std::stable_sort(order_idx.begin(), order_idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return fits[static_cast<std::size_t>(a)].slope < fits[static_cast<std::size_t>(b)].slope;
  });
  Eigen::Index chosen = order_idx.back();
  double cum = 0.0;
  for (Eigen::Index i : order_idx) {
    cum += mu.weights()(i);
    if (cum >= quantile * (1.0 - 1e-12)) {
      chosen = i;
      break;
    }
  }

  est.fit = fits[static_cast<std::size_t>(chosen)];
  set_range(est.fit, schedule);
  est.scales = schedule.scales();
  for (std::size_t c = 0; c < m; ++c) {
    est.values.push_back(std::exp(logf(chosen, static_cast<Eigen::Index>(c))));
  }
  est.estimate = std::clamp(est.fit.slope, 0.0, static_cast<double>(mu.dim()));

  double lo = fits[static_cast<std::size_t>(order_idx.front())].slope;
  double hi = fits[static_cast<std::size_t>(order_idx.back())].slope;
  double mean = 0.0;
  for (Eigen::Index i : order_idx) mean += mu.weights()(i) * fits[static_cast<std::size_t>(i)].slope;
  std::ostringstream os;
  os << "pointwise slopes: min " << lo << ", weighted mean " << mean << ", max " << hi
     << "; quantile " << quantile << " attained at support point " << chosen;
  est.diagnostics.push_back(os.str());
  flag_fit(est);
  return est;
}

ProfileCurve profile_curve(const PointCloud& cloud, const std::vector<KernelOrder>& s_grid,
                           const ScaleSchedule& schedule, const SolverOptions& options) {
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) {
    throw std::invalid_argument("s grid must be ascending");
  }
  ProfileCurve curve;
  for (const auto& s : s_grid) curve.estimates.push_back(box_profile(cloud, s, schedule, options));
  for (std::size_t i = 1; i < curve.estimates.size(); ++i) {
    const auto& a = curve.estimates[i - 1];
    const auto& b = curve.estimates[i];
    const double slack = 2.0 * std::hypot(a.fit.stderr_slope, b.fit.stderr_slope);
    if (b.estimate < a.estimate - slack) {
      curve.monotone = false;
      std::ostringstream os;
      os << "profile decreases from " << a.estimate << " at s = " << a.order->to_string() << " to "
         << b.estimate << " at s = " << b.order->to_string() << " (allowed slack " << slack << ")";
      curve.violations.push_back(os.str());
    }
  }
  return curve;
}

std::string to_json(const ProfileEstimate& est) {
  nlohmann::json j;
  j["kind"] = to_string(est.kind);
  j["order"] = est.order ? nlohmann::json(est.order->to_string()) : nlohmann::json(nullptr);
  j["estimate"] = est.estimate;
  j["fit"] = {{"slope", est.fit.slope},           {"intercept", est.fit.intercept},
              {"r_squared", est.fit.r_squared},   {"stderr", est.fit.stderr_slope},
              {"n_points", est.fit.n_points},     {"scale_min", est.fit.scale_min},
              {"scale_max", est.fit.scale_max}};
  j["scales"] = est.scales;
  j["values"] = est.values;
  j["diagnostics"] = est.diagnostics;
  return j.dump();
}

void write_curve_csv(std::ostream& os, const ProfileCurve& curve) {
  const auto old = os.precision(17);
  os << "s,estimate,stderr,r2\n";
  for (const auto& e : curve.estimates) {
    os << (e.order ? e.order->to_string() : "") << ',' << e.estimate << ',' << e.fit.stderr_slope
       << ',' << e.fit.r_squared << '\n';
  }
  os.precision(old);
}

}  // namespace dimprof
