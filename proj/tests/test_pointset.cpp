#include "dimprof/pointset.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace dimprof;

namespace {

// Left endpoints of the level-n Cantor intervals, by the ternary digit rule.
std::vector<double> cantor_endpoints(double ratio, int level) {
  std::vector<double> pts{0.0};
  for (int j = 1; j <= level; ++j) {
    const double shift = (1.0 - ratio) * std::pow(ratio, j - 1);
    std::vector<double> next = pts;
    for (double p : pts) next.push_back(p + shift);
    pts = next;
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

TEST_CASE("cantor level 2 has the four expected endpoints") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 2);
  REQUIRE(c.size() == 4);
  CHECK(c.dim() == 1);
  const double expect[] = {0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
  for (int i = 0; i < 4; ++i) CHECK(c.points()(i, 0) == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(c.resolution() == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("cantor points match the digit construction and come out ascending") {
  for (double ratio : {0.2, 0.25, 1.0 / 3.0, 0.5}) {
    for (int level : {0, 1, 4, 7}) {
      const PointCloud c = gen_cantor(ratio, level);
      const auto ref = cantor_endpoints(ratio, level);
      REQUIRE(c.size() == static_cast<Eigen::Index>(ref.size()));
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        CHECK(c.points()(i, 0) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-14));
      }
      CHECK(std::is_sorted(c.points().data(), c.points().data() + c.size()));
    }
  }
}

TEST_CASE("cantor level 10 has 2^10 points") {
  CHECK(gen_cantor(1.0 / 3.0, 10).size() == 1024);
  CHECK(gen_cantor(1.0 / 3.0, 7).size() == 128);
}

TEST_CASE("cantor rejects bad parameters") {
  CHECK_THROWS_AS(gen_cantor(0.6, 2), std::invalid_argument);
  CHECK_THROWS_AS(gen_cantor(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(gen_cantor(1.0 / 3.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(gen_cantor(1.0 / 3.0, 21), std::invalid_argument);
}

TEST_CASE("two-map IFS reproduces gen_cantor") {
  for (double ratio : {0.2, 1.0 / 3.0, 0.45}) {
    for (int level : {0, 2, 5}) {
      const PointCloud a = gen_ifs(cantor_ifs(ratio), level);
      const PointCloud b = gen_cantor(ratio, level);
      CHECK(a.points().isApprox(b.points()));
      CHECK(a.resolution() == b.resolution());
    }
  }
}

TEST_CASE("corner dust has 4^level distinct planar points") {
  const PointCloud d = gen_ifs(corner_dust_ifs(0.25), 3);
  CHECK(d.size() == 64);
  CHECK(d.dim() == 2);
  CHECK(d.points().minCoeff() >= 0.0);
  CHECK(d.points().maxCoeff() <= 1.0);
}

TEST_CASE("IFS validation") {
  IfsSpec bad = cantor_ifs(0.3);
  bad.maps[0].ratio = 1.0;
  CHECK_THROWS_AS(gen_ifs(bad, 1), std::invalid_argument);
  IfsSpec single;
  single.maps = {{0.5, Point::Zero(1)}};
  CHECK_THROWS_AS(gen_ifs(single, 1), std::invalid_argument);
}

TEST_CASE("product of two level-2 Cantor clouds has 16 planar points") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 2);
  const PointCloud p = product(c, c);
  CHECK(p.size() == 16);
  CHECK(p.dim() == 2);
  std::set<std::pair<double, double>> seen;
  for (Eigen::Index i = 0; i < p.size(); ++i) seen.insert({p.points()(i, 0), p.points()(i, 1)});
  CHECK(seen.size() == 16);
}

TEST_CASE("duplicates are rejected, merged keeps first occurrences") {
  Eigen::MatrixXd x(3, 1);
  x << 0.5, 0.1, 0.5;
  CHECK_THROWS_AS(PointCloud(x, 0.1), std::invalid_argument);
  const PointCloud m = PointCloud::merged(x, 0.1);
  REQUIRE(m.size() == 2);
  CHECK(m.points()(0, 0) == 0.5);
  CHECK(m.points()(1, 0) == 0.1);
}

TEST_CASE("invalid clouds") {
  CHECK_THROWS_AS(PointCloud(Eigen::MatrixXd(0, 1), 1.0), std::invalid_argument);
  Eigen::MatrixXd x(1, 1);
  x << std::nan("");
  CHECK_THROWS_AS(PointCloud(x, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(Eigen::MatrixXd::Zero(1, 1), 0.0), std::invalid_argument);
}

TEST_CASE("diameter") {
  CHECK(gen_cantor(1.0 / 3.0, 3).diameter() == doctest::Approx(1.0 - 1.0 / 27.0));
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 3, 4, 1, 1;
  CHECK(PointCloud(x, 1.0).diameter() == doctest::Approx(5.0));
}

TEST_CASE("projection of a horizontal segment") {
  Eigen::MatrixXd x(5, 2);
  for (int i = 0; i < 5; ++i) x.row(i) << i / 4.0, 0.0;
  const PointCloud seg(x, 0.25);
  const PointCloud along = project(seg, unit_direction(0.0));
  CHECK(along.size() == 5);
  const PointCloud vertical = project(seg, unit_direction(std::acos(-1.0) / 2.0));
  CHECK(vertical.size() == 1);
  CHECK_THROWS_AS(project(seg, Eigen::Vector2d(1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(project(gen_cantor(0.3, 2), Eigen::VectorXd::Ones(1)), std::invalid_argument);
}

TEST_CASE("projection output is sorted") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 3);
  const PointCloud p = project(product(c, c), unit_direction(0.7));
  CHECK(std::is_sorted(p.points().data(), p.points().data() + p.size()));
}

TEST_CASE("snap to grid keeps points within half a spacing") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 5);
  const double h = std::pow(2.0, -12);
  const PointCloud s = snap_to_grid(c, h);
  REQUIRE(s.size() == 32);
  for (Eigen::Index i = 0; i < 32; ++i) {
    CHECK(std::abs(s.points()(i, 0) - c.points()(i, 0)) <= h / 2 + 1e-15);
  }
  CHECK(s.resolution() >= h);
}

TEST_CASE("CSV round trip is exact") {
  const PointCloud c = product(gen_cantor(0.2, 3), gen_cantor(1.0 / 3.0, 2));
  std::stringstream ss;
  write_csv(ss, c);
  const PointCloud back = read_csv(ss, c.resolution(), c.label());
  CHECK(back == c);
}

TEST_CASE("JSON summary") {
  const std::string j = to_json(gen_cantor(1.0 / 3.0, 2));
  CHECK(j.find("\"count\":4") != std::string::npos);
  CHECK(j.find("\"N\":1") != std::string::npos);
}
