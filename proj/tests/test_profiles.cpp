#include "dimprof/profiles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace dimprof;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

// Least-squares slope of log I_s(r) for the uniform measure, summed directly.
double uniform_energy_slope(const PointCloud& c, double s, const ScaleSchedule& schedule) {
  std::vector<double> x;
  std::vector<double> y;
  const auto k = static_cast<double>(c.size());
  for (double r : schedule.scales()) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      for (Eigen::Index j = 0; j < c.size(); ++j) {
        const double d = std::abs(c.points()(i, 0) - c.points()(j, 0)) / r;
        sum += d <= 1.0 ? 1.0 : std::pow(d, -s);
      }
    }
    x.push_back(std::log(r));
    y.push_back(std::log(sum / (k * k)));
  }
  return fit_slope(x, y).slope;
}

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(ScaleSchedule({1.0, 0.5, 0.25, 0.125}));
  CHECK_THROWS(ScaleSchedule({1.0, 0.5, 0.25}));
  CHECK_THROWS(ScaleSchedule({1.0, 0.5, 0.5, 0.25}));
  CHECK_THROWS(ScaleSchedule({1.0, 0.9, 0.5, 0.25}));
  CHECK_THROWS(ScaleSchedule({1.0, 0.05, 0.025, 0.0125}));
  const ScaleSchedule g = ScaleSchedule::geometric(3.0, 2, 8);
  CHECK(g.size() == 7);
  CHECK(g.largest() == doctest::Approx(1.0 / 9.0));
  CHECK(g.smallest() == doctest::Approx(std::pow(3.0, -8)));
  CHECK(g.scaled(2.0).largest() == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("default schedule of the level-10 Cantor cloud is 3^-2 .. 3^-8") {
  const ScaleSchedule s = default_schedule(gen_cantor(1.0 / 3.0, 10), 3.0);
  REQUIRE(s.size() == 7);
  CHECK(s.largest() == doctest::Approx(std::pow(3.0, -2)));
  CHECK(s.smallest() == doctest::Approx(std::pow(3.0, -8)));
  CHECK_THROWS(default_schedule(gen_cantor(1.0 / 3.0, 3), 3.0));
  const ScaleSchedule narrow = default_schedule(gen_cantor(1.0 / 3.0, 10), 3.0, 2, 0.05);
  CHECK(narrow.largest() == doctest::Approx(1.0 / 27.0));
  CHECK(narrow.size() == 6);
  CHECK_THROWS(default_schedule(gen_cantor(1.0 / 3.0, 10), 3.0, 2, 0.0));
}

TEST_CASE("slope fit on exact lines") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 - 0.75 * v);
  const SlopeFit f = fit_slope(x, y);
  CHECK(f.slope == doctest::Approx(-0.75));
  CHECK(f.intercept == doctest::Approx(2.5));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.stderr_slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_slope({0, 1, 2}, {0, 1, 2}), ProfileError);
}

TEST_CASE("slope fit standard error matches the textbook formula") {
  const std::vector<double> x = {0, 1, 2, 3, 4, 5};
  const std::vector<double> y = {0.1, 0.9, 2.2, 2.8, 4.1, 5.0};
  const SlopeFit f = fit_slope(x, y);
  double mx = 2.5;
  double sxx = 0;
  double sse = 0;
  for (double v : x) sxx += (v - mx) * (v - mx);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    sse += e * e;
  }
  CHECK(f.stderr_slope == doctest::Approx(std::sqrt(sse / 4.0 / sxx)));
}

TEST_CASE("box dimension of the level-10 Cantor cloud") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 10);
  const ProfileEstimate e = box_dimension(c, ScaleSchedule::geometric(3.0, 2, 8));
  CHECK(e.estimate == doctest::Approx(kCantorDim).epsilon(1e-3));
  CHECK(e.fit.r_squared > 0.999);
}

TEST_CASE("box dimension of an interval") {
  Eigen::MatrixXd x(1024, 1);
  for (int i = 0; i < 1024; ++i) x(i, 0) = i / 1024.0;
  const PointCloud c(x, 1.0 / 1024);
  const ProfileEstimate e = box_dimension(c, default_schedule(c, 2.0));
  CHECK(e.estimate == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("profiles refuse scales below the resolution") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 4);
  CHECK_THROWS_AS(box_dimension(c, ScaleSchedule::geometric(3.0, 2, 8)), ProfileError);
  CHECK_THROWS_AS(box_profile(c, KernelOrder::finite(1.0), ScaleSchedule::geometric(3.0, 2, 8)), ProfileError);
}

TEST_CASE("box profile on the level-10 Cantor cloud") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 10);
  const ScaleSchedule s = ScaleSchedule::geometric(3.0, 2, 8);
  const ProfileEstimate small = box_profile(c, KernelOrder::finite(0.3), s);
  CHECK(std::abs(small.estimate - 0.3) <= 0.07);
  CHECK(std::abs(small.estimate - uniform_energy_slope(c, 0.3, s)) <= 0.03);
  const ProfileEstimate big = box_profile(c, KernelOrder::finite(2.0), s);
  CHECK(std::abs(big.estimate - kCantorDim) <= 0.07);
  const ProfileEstimate inf = box_profile(c, KernelOrder::infinity(), s);
  CHECK(inf.estimate == doctest::Approx(box_dimension(c, s).estimate).epsilon(1e-9));
  CHECK(inf.diagnostics.front() == kRegularityNote);
  CHECK(small.values.size() == 7);
}

TEST_CASE("fh profile under the natural measure") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 10);
  const ScaleSchedule s = ScaleSchedule::geometric(3.0, 2, 8);
  const WeightedMeasure mu = WeightedMeasure::uniform(c);
  CHECK(std::abs(fh_profile(mu, KernelOrder::finite(0.3), s).estimate - 0.3) <= 0.07);
  CHECK(std::abs(fh_profile(mu, KernelOrder::finite(2.0), s).estimate - kCantorDim) <= 0.07);
  CHECK_THROWS(fh_profile(mu, KernelOrder::finite(1.0), s, 0.0));
}

TEST_CASE("fh profile of a point mass is zero") {
  const auto mu = WeightedMeasure::point_mass(Point::Zero(1));
  const ProfileEstimate e = fh_profile(mu, KernelOrder::finite(1.0), ScaleSchedule::geometric(2.0, 1, 6));
  CHECK(e.estimate == 0.0);
}

TEST_CASE("profile curve is monotone and serializes") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 8);
  const ScaleSchedule s = default_schedule(c, 3.0);
  const std::vector<KernelOrder> grid = {KernelOrder::finite(0.2), KernelOrder::finite(0.5), KernelOrder::finite(1.0),
                                         KernelOrder::infinity()};
  const ProfileCurve curve = profile_curve(c, grid, s);
  CHECK(curve.monotone);
  CHECK(curve.estimates.size() == 4);
  std::ostringstream os;
  write_curve_csv(os, curve);
  CHECK(os.str().rfind("s,estimate,stderr,r2\n", 0) == 0);
  CHECK(to_json(curve.estimates[0]).find("\"box_profile\"") != std::string::npos);
  const std::vector<KernelOrder> unsorted = {KernelOrder::finite(1.0), KernelOrder::finite(0.5)};
  CHECK_THROWS(profile_curve(c, unsorted, s));
}
