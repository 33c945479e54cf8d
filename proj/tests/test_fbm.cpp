#include "dimprof/fbm.hpp"
#include "dimprof/fft.hpp"
#include "dimprof/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

using namespace dimprof;

namespace {

// O(n^2) DFT with the same sign convention.
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const auto n = x.size();
  std::vector<std::complex<double>> out(n);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      out[k] += x[j] * std::polar(1.0, -2.0 * pi * static_cast<double>(j * k) / static_cast<double>(n));
    }
  }
  return out;
}

struct Moments {
  double mean = 0;
  double se = 0;
};

template <typename F>
Moments monte_carlo(int reps, F&& sample) {
  double s = 0;
  double s2 = 0;
  for (int r = 0; r < reps; ++r) {
    const double v = sample(r);
    s += v;
    s2 += v * v;
  }
  Moments m;
  m.mean = s / reps;
  m.se = std::sqrt((s2 / reps - m.mean * m.mean) / reps);
  return m;
}

}  // namespace

TEST_CASE("fft agrees with the naive transform") {
  std::vector<std::complex<double>> x;
  for (int i = 0; i < 64; ++i) x.emplace_back(std::sin(0.3 * i), std::cos(1.7 * i * i));
  auto y = x;
  fft_inplace(y);
  const auto ref = naive_dft(x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-10);
  fft_inplace(y, true);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] / 64.0 - x[i]) < 1e-12);
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(1000));
}

TEST_CASE("fGn autocovariance") {
  CHECK(fgn_autocovariance(0.5, 1.0, 1) == 0.0);
  CHECK(fgn_autocovariance(0.5, 0.01, 7) == 0.0);
  CHECK(fgn_autocovariance(0.3, 0.25, 0) == doctest::Approx(std::pow(0.25, 0.6)));
  CHECK(fgn_autocovariance(0.7, 1.0, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.4) - 2.0)));
  CHECK(fgn_autocovariance(0.7, 1.0, 1) == doctest::Approx(0.3195).epsilon(1e-3));
  CHECK(fgn_autocovariance(0.7, 1.0, -3) == fgn_autocovariance(0.7, 1.0, 3));
  CHECK_THROWS(fgn_autocovariance(1.0, 1.0, 1));
  CHECK_THROWS(fgn_autocovariance(0.0, 1.0, 1));
}

TEST_CASE("fBM covariance") {
  CHECK(fbm_covariance(0.5, 0.3, 0.8) == doctest::Approx(0.3));
  CHECK(fbm_covariance(0.7, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(fbm_covariance(0.7, 0.25, 0.75) ==
        doctest::Approx(0.5 * (std::pow(0.25, 1.4) + std::pow(0.75, 1.4) - std::pow(0.5, 1.4))));
}

TEST_CASE("paths start at the origin and are deterministic") {
  for (auto method : {FbmMethod::circulant, FbmMethod::cholesky}) {
    const FbmPath a = simulate(256, 3, 0.4, 99, method);
    CHECK(a.values.rows() == 257);
    CHECK(a.values.cols() == 3);
    CHECK(a.values.row(0).isZero(0.0));
    const FbmPath b = simulate(256, 3, 0.4, 99, method);
    CHECK(a.values == b.values);
    const FbmPath c = simulate(256, 3, 0.4, 100, method);
    CHECK(a.values != c.values);
  }
}

TEST_CASE("simulate validates its arguments") {
  CHECK_THROWS(simulate(1000, 1, 0.5, 1));
  CHECK_THROWS(simulate(1024, 0, 0.5, 1));
  CHECK_THROWS(simulate(1024, 1, 1.2, 1));
  CHECK_THROWS(simulate(1L << 13, 1, 0.5, 1, FbmMethod::cholesky));
  CHECK(parse_fbm_method("cholesky") == FbmMethod::cholesky);
  CHECK_THROWS(parse_fbm_method("wavelet"));
}

TEST_CASE("Brownian case: Var X(1) = 1") {
  const Moments m = monte_carlo(2000, [](int r) {
    const double x = simulate(1024, 1, 0.5, 7 + (static_cast<std::uint64_t>(r) << 16)).values(1024, 0);
    return x * x;
  });
  CHECK(std::abs(m.mean - 1.0) <= 0.1);
}

TEST_CASE("H = 0.7: Cov(X(0.25), X(0.75)) within 3 standard errors") {
  const double exact = fbm_covariance(0.7, 0.25, 0.75);
  const Moments m = monte_carlo(2000, [](int r) {
    const FbmPath p = simulate(1024, 1, 0.7, 31 + (static_cast<std::uint64_t>(r) << 16));
    return p.values(256, 0) * p.values(768, 0);
  });
  CHECK(std::abs(m.mean - exact) <= 3 * m.se);
}

TEST_CASE("cholesky and circulant covariances agree") {
  const long n = 256;
  const long a = 32;
  const long b = 225;
  auto cov = [&](FbmMethod method) {
    return monte_carlo(2000, [&](int r) {
      const FbmPath p = simulate(n, 1, 0.3, 500 + (static_cast<std::uint64_t>(r) << 16), method);
      return p.values(a, 0) * p.values(b, 0);
    });
  };
  const Moments x = cov(FbmMethod::circulant);
  const Moments y = cov(FbmMethod::cholesky);
  CHECK(std::abs(x.mean - y.mean) <= 4 * std::hypot(x.se, y.se));
}

TEST_CASE("self-similarity: Var X(2t) / Var X(t) = 2^{2H}") {
  const double h = 0.7;
  const Moments a = monte_carlo(3000, [&](int r) {
    const double x = simulate(512, 1, h, 77 + (static_cast<std::uint64_t>(r) << 16)).values(128, 0);
    return x * x;
  });
  const Moments b = monte_carlo(3000, [&](int r) {
    const double x = simulate(512, 1, h, 77 + (static_cast<std::uint64_t>(r) << 16)).values(256, 0);
    return x * x;
  });
  const double ratio = b.mean / a.mean;
  // delta method on the ratio of two positively correlated means: a loose bound
  const double se = ratio * std::hypot(a.se / a.mean, b.se / b.mean);
  CHECK(std::abs(ratio - std::pow(2.0, 2 * h)) <= 4 * se);
}

TEST_CASE("coordinates are independent") {
  const Moments m = monte_carlo(2000, [](int r) {
    const FbmPath p = simulate(256, 2, 0.6, 13 + (static_cast<std::uint64_t>(r) << 16));
    return p.values(200, 0) * p.values(200, 1);
  });
  CHECK(std::abs(m.mean) <= 4 * m.se);
}

TEST_CASE("image cloud") {
  const FbmPath p = simulate(1L << 15, 2, 0.5, 3);
  const PointCloud origin = image_cloud(p, PointCloud(Eigen::MatrixXd::Zero(1, 1), 1.0));
  CHECK(origin.size() == 1);
  CHECK(origin.points().isZero(0.0));

  const FbmPath q = simulate(64, 1, 0.5, 4);
  Eigen::MatrixXd grid(65, 1);
  for (int j = 0; j <= 64; ++j) grid(j, 0) = j / 64.0;
  CHECK(image_cloud(q, PointCloud(grid, 1.0 / 64)).size() == 65);

  const PointCloud e = gen_cantor(1.0 / 3.0, 7);
  const PointCloud x = image_cloud(p, e);
  CHECK(x.size() == 128);
  CHECK(x.dim() == 2);
  CHECK(x.label().find("snap error <= 1.52588e-05") != std::string::npos);
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double t = e.points()(i, 0);
    const long j = std::lround(t * (1L << 15));
    CHECK(std::abs(t - p.time(j)) <= std::pow(2.0, -16));
  }
  Eigen::MatrixXd outside(1, 1);
  outside << 1.5;
  CHECK_THROWS(image_cloud(p, PointCloud(outside, 1.0)));
}

TEST_CASE("serialization and cache key") {
  const FbmPath p = simulate(8, 2, 0.5, 1);
  std::ostringstream os;
  write_csv(os, p);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 9);
  CHECK(metadata_json(p).find("\"method\":\"circulant\"") != std::string::npos);
  CHECK(cache_key(8, 2, 0.5, 1, FbmMethod::circulant) == cache_key(8, 2, 0.5, 1, FbmMethod::circulant));
  CHECK(cache_key(8, 2, 0.5, 1, FbmMethod::circulant) != cache_key(8, 2, 0.5, 2, FbmMethod::circulant));
  CHECK(cache_key(8, 2, 0.5, 1, FbmMethod::circulant).size() == 16);
}

TEST_CASE("gaussian stream") {
  GaussianStream a(42, 0);
  GaussianStream b(42, 0);
  GaussianStream c(42, 1);
  double sum = 0;
  double sum2 = 0;
  bool differs = false;
  for (int i = 0; i < 20000; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    if (x != c.normal()) differs = true;
    sum += x;
    sum2 += x * x;
  }
  CHECK(differs);
  CHECK(std::abs(sum / 20000) < 0.03);
  CHECK(std::abs(sum2 / 20000 - 1.0) < 0.04);
}
