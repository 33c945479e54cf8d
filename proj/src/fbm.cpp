#include "dimprof/fbm.hpp"

#include "dimprof/fft.hpp"
#include "dimprof/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace dimprof {

double GaussianStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double q = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::string to_string(FbmMethod method) {
  return method == FbmMethod::circulant ? "circulant" : "cholesky";
}

FbmMethod parse_fbm_method(const std::string& text) {
  if (text == "circulant") return FbmMethod::circulant;
  if (text == "cholesky") return FbmMethod::cholesky;
  throw std::invalid_argument("unknown fBM method: " + text);
}

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("Hurst index must lie in (0,1)");
}

// n increments of fGn with grid step 1/n, one coordinate.
Eigen::VectorXd circulant_increments(const std::vector<double>& eigen, long n, GaussianStream& g) {
  const long m = 2 * n;
  std::vector<std::complex<double>> z(static_cast<std::size_t>(m));
  const auto md = static_cast<double>(m);
  z[0] = std::sqrt(eigen[0] / md) * g.normal();
  z[n] = std::sqrt(eigen[n] / md) * g.normal();
  for (long k = 1; k < n; ++k) {
    const double a = g.normal();
    const double b = g.normal();
    const double s = std::sqrt(eigen[k] / (2.0 * md));
    z[k] = {s * a, s * b};
    z[m - k] = std::conj(z[k]);
  }
  fft_inplace(z);
  Eigen::VectorXd out(n);
  for (long j = 0; j < n; ++j) out(j) = z[j].real();
  return out;
}

double nearest_neighbour_gap(const Eigen::MatrixXd& pts) {
  const Eigen::Index k = pts.rows();
  if (k < 2) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  if (pts.cols() == 1) {
    std::vector<double> x(pts.data(), pts.data() + k);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 1; i < x.size(); ++i) best = std::min(best, x[i] - x[i - 1]);
    return best;
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) best = std::min(best, (pts.row(i) - pts.row(j)).norm());
  }
  return best;
}

}  // namespace

double fgn_autocovariance(double hurst, double step, long k) {
  check_hurst(hurst);
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double h2 = 2.0 * hurst;
  const auto kk = static_cast<double>(std::abs(k));
  // |k-1|^{2H} at k = 0 is 1, matching the symmetric extension
  const double value = std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2);
  return 0.5 * std::pow(step, h2) * value;
}

double fbm_covariance(double hurst, double s, double t) {
  check_hurst(hurst);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(std::abs(s), h2) + std::pow(std::abs(t), h2) - std::pow(std::abs(s - t), h2));
}

FbmPath simulate(long n, int d, double hurst, std::uint64_t seed, FbmMethod method) {
  check_hurst(hurst);
  if (!is_power_of_two(n)) throw std::invalid_argument("grid size n must be a power of two");
  if (d < 1) throw std::invalid_argument("dimension d must be at least 1");
  const long cap = method == FbmMethod::circulant ? kMaxCirculantSteps : kMaxCholeskySteps;
  if (n > cap) throw std::invalid_argument("grid size exceeds the limit for this method");

  FbmPath path;
  path.n = n;
  path.hurst = hurst;
  path.seed = seed;
  path.method = method;
  path.values = Eigen::MatrixXd::Zero(n + 1, d);
  const double step = 1.0 / static_cast<double>(n);

  if (method == FbmMethod::circulant) {
    const long m = 2 * n;
    std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
    for (long j = 0; j <= n; ++j) row[j] = fgn_autocovariance(hurst, step, j);
    for (long j = 1; j < n; ++j) row[m - j] = row[j];
    fft_inplace(row);
    std::vector<double> eigen(static_cast<std::size_t>(m));
    double largest = 0.0;
    for (long k = 0; k < m; ++k) {
      eigen[k] = row[k].real();
      largest = std::max(largest, eigen[k]);
    }
    for (auto& e : eigen) {
      if (e < -1e-8 * largest) {
        std::ostringstream os;
        os << "circulant embedding has eigenvalue " << e << " (max " << largest << ")";
        throw EmbeddingError(os.str());
      }
      e = std::max(e, 0.0);
    }
    for (int c = 0; c < d; ++c) {
      GaussianStream g(seed, static_cast<std::uint64_t>(c));
      const Eigen::VectorXd inc = circulant_increments(eigen, n, g);
      double acc = 0.0;
      for (long j = 0; j < n; ++j) {
        acc += inc(j);
        path.values(j + 1, c) = acc;
      }
    }
    return path;
  }

  Eigen::MatrixXd cov(n, n);
  for (long a = 0; a < n; ++a) {
    for (long b = 0; b <= a; ++b) {
      const double v = fbm_covariance(hurst, path.time(a + 1), path.time(b + 1));
      cov(a, b) = v;
      cov(b, a) = v;
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw EmbeddingError("fBM covariance is not positive definite");
  for (int c = 0; c < d; ++c) {
    GaussianStream g(seed, static_cast<std::uint64_t>(c));
    Eigen::VectorXd z(n);
    for (long j = 0; j < n; ++j) z(j) = g.normal();
    path.values.col(c).tail(n) = llt.matrixL() * z;
  }
  return path;
}

PointCloud image_cloud(const FbmPath& path, const PointCloud& cloud) {
  if (cloud.dim() != 1) throw std::invalid_argument("parameter cloud must be one-dimensional");
  const Eigen::VectorXd t = cloud.points().col(0);
  if (t.minCoeff() < 0.0 || t.maxCoeff() > 1.0) {
    throw std::invalid_argument("parameter cloud must lie in [0,1]");
  }
  Eigen::MatrixXd pts(cloud.size(), path.dim());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(std::llround(t(i) * static_cast<double>(path.n)));
    pts.row(i) = path.values.row(j);
  }
  std::ostringstream label;
  label << "fbm(H=" << path.hurst << ",d=" << path.dim() << ",seed=" << path.seed
        << ")[" << cloud.label() << "], snap error <= " << 0.5 / static_cast<double>(path.n);
  // drop repeats first so the gap is between distinct points
  const PointCloud distinct = PointCloud::merged(pts, 1.0, label.str());
  return PointCloud(distinct.points(), nearest_neighbour_gap(distinct.points()), label.str());
}

void write_csv(std::ostream& os, const FbmPath& path) {
  const auto old = os.precision(17);
  for (long j = 0; j <= path.n; ++j) {
    os << path.time(j);
    for (Eigen::Index c = 0; c < path.dim(); ++c) os << ',' << path.values(j, c);
    os << '\n';
  }
  os.precision(old);
}

std::string metadata_json(const FbmPath& path) {
  nlohmann::json j;
  j["hurst"] = path.hurst;
  j["n"] = path.n;
  j["d"] = path.dim();
  j["seed"] = path.seed;
  j["method"] = to_string(path.method);
  return j.dump();
}

std::string cache_key(long n, int d, double hurst, std::uint64_t seed, FbmMethod method) {
  std::ostringstream meta;
  meta << std::setprecision(17) << "fbm|" << n << '|' << d << '|' << hurst << '|' << seed << '|'
       << to_string(method);
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : meta.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace dimprof
