#pragma once

#include "dimprof/pointset.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace dimprof {

/// Order s of the kernel psi_s: a finite positive real or infinity.
class KernelOrder {
 public:
  static KernelOrder finite(double s);
  static KernelOrder infinity() { return KernelOrder(std::numeric_limits<double>::infinity()); }
  /// Parses a decimal number or "inf" / "infinity".
  static KernelOrder parse(const std::string& text);

  bool is_infinite() const { return std::isinf(s_); }
  /// The order as a double; +inf for the indicator kernel.
  double value() const { return s_; }
  std::string to_string() const;

  auto operator<=>(const KernelOrder&) const = default;

 private:
  explicit KernelOrder(double s) : s_(s) {}
  double s_;
};

/// psi_s evaluated at a point of Euclidean norm `norm`:
/// min(1, norm^-s) for finite s, the closed unit-ball indicator for s = inf.
template <typename Scalar>
Scalar psi_of_norm(const KernelOrder& order, Scalar norm) {
  if (norm <= Scalar(1)) return Scalar(1);
  if (order.is_infinite()) return Scalar(0);
  return std::pow(norm, -static_cast<Scalar>(order.value()));
}

template <typename Derived>
typename Derived::Scalar psi(const KernelOrder& order, const Eigen::MatrixBase<Derived>& x) {
  return psi_of_norm(order, x.norm());
}

/// Finitely supported probability measure. Support points are rows.
class WeightedMeasure {
 public:
  WeightedMeasure(Eigen::MatrixXd support, Eigen::VectorXd weights);

  static WeightedMeasure point_mass(const Point& x);
  /// Equal weight on every point of the cloud (the natural measure of a
  /// self-similar cloud built with equal ratios).
  static WeightedMeasure uniform(const PointCloud& cloud);

  Eigen::Index size() const { return support_.rows(); }
  Eigen::Index dim() const { return support_.cols(); }
  const Eigen::MatrixXd& support() const { return support_; }
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  Eigen::MatrixXd support_;
  Eigen::VectorXd weights_;
};

inline constexpr double kWeightSumTolerance = 1e-10;

/// F_s^mu(x, r) = sum_j w_j psi_s((x - y_j) / r).
double potential(const KernelOrder& order, const WeightedMeasure& mu,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double r);

/// Potentials F_s^mu(x_i, r) at every support point, as a vector.
Eigen::VectorXd support_potentials(const KernelOrder& order, const WeightedMeasure& mu, double r);

/// I_s(r, mu): the mu-average of the potential (= w^T K w).
double functional_I(const KernelOrder& order, const WeightedMeasure& mu, double r);

/// J_s(r, mu): the largest potential over the support (points of positive mass).
double functional_J(const KernelOrder& order, const WeightedMeasure& mu, double r);

/// Dense array psi_s((x_i - x_j) / r).
struct KernelMatrix {
  Eigen::MatrixXd entries;
  double scale = 1.0;
  KernelOrder order = KernelOrder::infinity();

  Eigen::Index size() const { return entries.rows(); }
  /// Throws unless symmetric with unit diagonal and entries in [0,1].
  void validate() const;
};

inline constexpr Eigen::Index kMaxKernelPoints = 20'000;

/// Kernel entries for an arbitrary row-point matrix. Entries are computed
/// independently, so the result does not depend on evaluation order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_entries(
    const Eigen::MatrixBase<Derived>& points, typename Derived::Scalar r, const KernelOrder& order) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = points.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out(j, j) = Scalar(1);
    for (Eigen::Index i = j + 1; i < k; ++i) {
      const Scalar v = psi_of_norm(order, Scalar((points.row(i) - points.row(j)).norm() / r));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

KernelMatrix kernel_matrix(const PointCloud& points, double r, const KernelOrder& order);

}  // namespace dimprof
