#include "dimprof/pointset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dimprof {

namespace {

// Indices of rows that repeat an earlier row within kDuplicateTolerance.
// Sweeps rows sorted by their first coordinate, so the cost is O(k log k)
// unless many points share a first coordinate.
std::vector<bool> duplicate_mask(const Eigen::MatrixXd& pts) {
  const Eigen::Index k = pts.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return pts(a, 0) < pts(b, 0); });

  std::vector<bool> dup(static_cast<std::size_t>(k), false);
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Eigen::Index i = order[a];
    if (dup[static_cast<std::size_t>(i)]) continue;
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Eigen::Index j = order[b];
      if (pts(j, 0) - pts(i, 0) > kDuplicateTolerance) break;
      if ((pts.row(i) - pts.row(j)).cwiseAbs().maxCoeff() <= kDuplicateTolerance) {
        // keep whichever came first in the input
        dup[static_cast<std::size_t>(std::max(i, j))] = true;
        if (j < i) break;
      }
    }
  }
  return dup;
}

void check_count(double count) {
  if (count > static_cast<double>(kMaxCloudPoints)) {
    throw std::invalid_argument("point count exceeds the 1e7 cap");
  }
}

}  // namespace

PointCloud::PointCloud(Eigen::MatrixXd points, double resolution, std::string label)
    : points_(std::move(points)), resolution_(resolution), label_(std::move(label)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw std::invalid_argument("point cloud must be nonempty");
  }
  if (!points_.allFinite()) {
    throw std::invalid_argument("point coordinates must be finite");
  }
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    throw std::invalid_argument("resolution must be positive");
  }
  const auto dup = duplicate_mask(points_);
  if (std::find(dup.begin(), dup.end(), true) != dup.end()) {
    throw std::invalid_argument("point cloud contains duplicate points");
  }
}

PointCloud PointCloud::merged(const Eigen::MatrixXd& points, double resolution,
                              std::string label) {
  if (points.rows() == 0) throw std::invalid_argument("point cloud must be nonempty");
  const auto dup = duplicate_mask(points);
  const auto kept = std::count(dup.begin(), dup.end(), false);
  Eigen::MatrixXd out(kept, points.cols());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (!dup[static_cast<std::size_t>(i)]) out.row(row++) = points.row(i);
  }
  return PointCloud(std::move(out), resolution, std::move(label));
}

double PointCloud::diameter() const {
  if (dim() == 1) {
    return points_.col(0).maxCoeff() - points_.col(0).minCoeff();
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double d = (points_.rowwise() - points_.row(i)).rowwise().norm().maxCoeff();
    best = std::max(best, d);
  }
  return best;
}

void IfsSpec::validate() const {
  if (maps.size() < 2) throw std::invalid_argument("IFS needs at least two maps");
  for (const auto& m : maps) {
    if (!(m.ratio > 0.0 && m.ratio < 1.0)) {
      throw std::invalid_argument("IFS ratios must lie in (0,1)");
    }
    if (m.translation.size() != dim) {
      throw std::invalid_argument("IFS translation has the wrong dimension");
    }
  }
}

IfsSpec cantor_ifs(double ratio) {
  IfsSpec spec;
  spec.dim = 1;
  spec.maps = {{ratio, Point::Constant(1, 0.0)}, {ratio, Point::Constant(1, 1.0 - ratio)}};
  return spec;
}

IfsSpec corner_dust_ifs(double ratio) {
  IfsSpec spec;
  spec.dim = 2;
  const double far = 1.0 - ratio;
  for (double x : {0.0, far}) {
    for (double y : {0.0, far}) {
      spec.maps.push_back({ratio, Eigen::Vector2d(x, y)});
    }
  }
  return spec;
}

PointCloud gen_ifs(const IfsSpec& spec, int level) {
  spec.validate();
  if (level < 0) throw std::invalid_argument("level must be nonnegative");
  const auto m = static_cast<double>(spec.maps.size());
  check_count(std::pow(m, level));

  // Breadth-first: after step j, row a holds f_{a_1} o ... o f_{a_j}(0) with
  // a_1 the most significant digit. Prepending an outer map keeps that order.
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(1, spec.dim);
  double max_ratio = 0.0;
  for (const auto& f : spec.maps) max_ratio = std::max(max_ratio, f.ratio);
  for (int step = 0; step < level; ++step) {
    Eigen::MatrixXd next(pts.rows() * static_cast<Eigen::Index>(spec.maps.size()), spec.dim);
    Eigen::Index row = 0;
    for (const auto& f : spec.maps) {
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        next.row(row++) = f.ratio * pts.row(i) + f.translation.transpose();
      }
    }
    pts = std::move(next);
  }
  std::ostringstream label;
  label << "ifs(maps=" << spec.maps.size() << ",level=" << level << ")";
  return PointCloud::merged(pts, std::pow(max_ratio, level), label.str());
}

PointCloud gen_cantor(double ratio, int level) {
  if (!(ratio > 0.0 && ratio <= 0.5)) {
    throw std::invalid_argument("Cantor ratio must lie in (0, 1/2]");
  }
  if (level < 0 || level > 20) throw std::invalid_argument("Cantor level must lie in [0, 20]");
  PointCloud out = gen_ifs(cantor_ifs(ratio), level);
  std::ostringstream label;
  label << std::setprecision(17) << "cantor(ratio=" << ratio << ",level=" << level << ")";
  return PointCloud(out.points(), out.resolution(), label.str());
}

PointCloud product(const PointCloud& a, const PointCloud& b) {
  check_count(static_cast<double>(a.size()) * static_cast<double>(b.size()));
  Eigen::MatrixXd pts(a.size() * b.size(), a.dim() + b.dim());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      pts.row(row).head(a.dim()) = a.points().row(i);
      pts.row(row).tail(b.dim()) = b.points().row(j);
      ++row;
    }
  }
  return PointCloud(std::move(pts), std::max(a.resolution(), b.resolution()),
                    a.label() + "x" + b.label());
}

PointCloud project(const PointCloud& cloud, const Eigen::Ref<const Eigen::VectorXd>& direction) {
  if (cloud.dim() < 2) throw std::invalid_argument("projection needs N >= 2");
  if (direction.size() != cloud.dim()) {
    throw std::invalid_argument("direction has the wrong dimension");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("projection direction must be a unit vector");
  }
  Eigen::VectorXd t = cloud.points() * direction;
  std::sort(t.begin(), t.end());
  return PointCloud::merged(t, cloud.resolution(), "proj(" + cloud.label() + ")");
}

PointCloud snap_to_grid(const PointCloud& cloud, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  const Eigen::MatrixXd snapped =
      cloud.points().unaryExpr([spacing](double x) { return std::round(x / spacing) * spacing; });
  return PointCloud::merged(snapped, std::max(cloud.resolution(), spacing), cloud.label());
}

Eigen::Vector2d unit_direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

void write_csv(std::ostream& os, const PointCloud& cloud) {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = 0; j < cloud.dim(); ++j) {
      if (j) os << ',';
      os << cloud.points()(i, j);
    }
    os << '\n';
  }
  os.precision(old);
}

PointCloud read_csv(std::istream& is, double resolution, std::string label) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("CSV rows have inconsistent widths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty CSV");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return PointCloud(std::move(pts), resolution, std::move(label));
}

std::string to_json(const PointCloud& cloud) {
  nlohmann::json j;
  j["label"] = cloud.label();
  j["N"] = cloud.dim();
  j["resolution"] = cloud.resolution();
  j["count"] = cloud.size();
  return j.dump();
}

}  // namespace dimprof
