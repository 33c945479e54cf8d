#include "dimprof/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace dimprof {

namespace {

void check_scale(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("scale r must be positive");
}

}  // namespace

KernelOrder KernelOrder::finite(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("finite kernel order must be positive");
  }
  return KernelOrder(s);
}

KernelOrder KernelOrder::parse(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "inf" || t == "infinity" || t == "+inf") return infinity();
  std::size_t used = 0;
  const double s = std::stod(t, &used);
  if (used != t.size()) throw std::invalid_argument("bad kernel order: " + text);
  return finite(s);
}

std::string KernelOrder::to_string() const {
  if (is_infinite()) return "inf";
  // shortest text that parses back to the same double
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, s_).ptr;
  return std::string(buf, end);
}

WeightedMeasure::WeightedMeasure(Eigen::MatrixXd support, Eigen::VectorXd weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.rows() == 0) throw std::invalid_argument("measure support must be nonempty");
  if (support_.rows() != weights_.size()) {
    throw std::invalid_argument("support and weights differ in length");
  }
  if (!support_.allFinite() || !weights_.allFinite() || weights_.minCoeff() < 0.0) {
    throw std::invalid_argument("weights must be finite and nonnegative");
  }
  if (std::abs(weights_.sum() - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("weights must sum to 1");
  }
  // Distinctness is the PointCloud invariant; reuse its check.
  (void)PointCloud(support_, 1.0);
}

WeightedMeasure WeightedMeasure::point_mass(const Point& x) {
  return WeightedMeasure(x.transpose(), Eigen::VectorXd::Ones(1));
}

WeightedMeasure WeightedMeasure::uniform(const PointCloud& cloud) {
  return WeightedMeasure(cloud.points(),
                         Eigen::VectorXd::Constant(cloud.size(), 1.0 / static_cast<double>(cloud.size())));
}

double potential(const KernelOrder& order, const WeightedMeasure& mu,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double r) {
  check_scale(r);
  if (x.size() != mu.dim()) throw std::invalid_argument("point has the wrong dimension");
  double total = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double w = mu.weights()(j);
    if (w == 0.0) continue;
    total += w * psi_of_norm(order, (x - mu.support().row(j).transpose()).norm() / r);
  }
  return total;
}

Eigen::VectorXd support_potentials(const KernelOrder& order, const WeightedMeasure& mu, double r) {
  check_scale(r);
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    out(i) = potential(order, mu, mu.support().row(i).transpose(), r);
  }
  return out;
}

double functional_I(const KernelOrder& order, const WeightedMeasure& mu, double r) {
  return mu.weights().dot(support_potentials(order, mu, r));
}

double functional_J(const KernelOrder& order, const WeightedMeasure& mu, double r) {
  const Eigen::VectorXd f = support_potentials(order, mu, r);
  double best = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu.weights()(i) > 0.0) best = std::max(best, f(i));
  }
  return best;
}

void KernelMatrix::validate() const {
  const Eigen::Index k = entries.rows();
  if (k == 0 || entries.cols() != k) throw std::invalid_argument("kernel matrix must be square");
  if (!entries.allFinite()) throw std::invalid_argument("kernel matrix must be finite");
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("kernel matrix must be symmetric");
  }
  if ((entries.diagonal().array() != 1.0).any()) {
    throw std::invalid_argument("kernel matrix must have unit diagonal");
  }
  if (entries.minCoeff() < 0.0 || entries.maxCoeff() > 1.0) {
    throw std::invalid_argument("kernel entries must lie in [0,1]");
  }
}

KernelMatrix kernel_matrix(const PointCloud& points, double r, const KernelOrder& order) {
  check_scale(r);
  if (points.size() > kMaxKernelPoints) {
    throw std::invalid_argument("kernel matrix limited to 2e4 points");
  }
  return KernelMatrix{kernel_entries(points.points(), r, order), r, order};
}

}  // namespace dimprof
