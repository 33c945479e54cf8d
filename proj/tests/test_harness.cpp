#include "dimprof/harness.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace dimprof;

namespace {

double cell(const Table& t, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == column) return std::get<double>(t.rows.at(row).at(c));
  }
  throw std::out_of_range(column);
}

const Check& find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("checks") {
  CHECK(Check{"a", 1.0, Check::Relation::at_most, 1.0, ""}.pass());
  CHECK_FALSE(Check{"a", 1.1, Check::Relation::at_most, 1.0, ""}.pass());
  CHECK(Check{"a", 2.0, Check::Relation::at_least, 1.0, ""}.pass());
  CHECK_FALSE(Check{"a", std::nan(""), Check::Relation::at_least, 1.0, ""}.pass());
  ExperimentReport empty;
  CHECK_FALSE(empty.passed());
}

TEST_CASE("simplex grid minimum") {
  Eigen::Matrix2d k;
  k << 1.0, 0.2, 0.2, 1.0;
  CHECK(simplex_grid_minimum(k, 10000) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(simplex_grid_minimum(Eigen::MatrixXd::Identity(5, 5), 10000) == doctest::Approx(0.2).epsilon(1e-9));
  Eigen::Matrix3d m;
  m << 1, 1, 0, 1, 1, 1, 0, 1, 1;
  CHECK(simplex_grid_minimum(m, 10000) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("cell representatives") {
  const PointCloud c = gen_cantor(1.0 / 3.0, 4);
  const PointCloud r = cell_representatives(c, 9);
  REQUIRE(r.size() == 4);
  CHECK(r.points()(1, 0) == doctest::Approx(2.0 / 9.0));
  CHECK(cell_representatives(c, 1).size() == 1);
  CHECK_THROWS(cell_representatives(product(c, c), 3));
}

TEST_CASE("sets and schedules from config") {
  Config c = default_config("profile_curve");
  CHECK(make_set(c).size() == 1024);
  CHECK(*analytic_dimension(c) == doctest::Approx(std::log(2.0) / std::log(3.0)));
  CHECK(configured_schedule(c, make_set(c)).size() == 7);
  c.set("set", "interval");
  CHECK(make_set(c).size() == 1024);
  CHECK(*analytic_dimension(c) == 1.0);
  c.set("set", "nonsense");
  CHECK_THROWS_AS(make_set(c), ConfigError);
  CHECK_THROWS_AS(default_config("nope"), ConfigError);
}

TEST_CASE("every experiment has defaults") {
  for (const auto& name : experiment_names()) {
    const Config c = default_config(name);
    CHECK(c.get("experiment") == name);
    CHECK(c.has("seed"));
  }
}

TEST_CASE("replicate seeds keep coordinate streams apart") {
  CHECK(replicate_seed(5, 0) == 5);
  CHECK((replicate_seed(5, 1) ^ 1u) != (replicate_seed(5, 0) ^ 0u));
  CHECK(replicate_seed(5, 3) - replicate_seed(5, 2) == 65536u);
}

TEST_CASE("single-point profile curve is all zeros") {
  Config c;
  c.set("set", "point");
  const ExperimentReport r = run_experiment("profile_curve", c);
  CHECK(r.passed());
  const Table* t = r.table("curve");
  REQUIRE(t);
  for (std::size_t i = 0; i < t->rows.size(); ++i) CHECK(cell(*t, i, "estimate") == 0.0);
}

TEST_CASE("interval: box profile at s = 2 collapses onto the box dimension") {
  Config c;
  c.set("set", "interval");
  c.set("orders", "2");
  c.set("top", "0.125");
  const ExperimentReport r = run_experiment("profile_curve", c);
  CHECK(find_check(r, "collapse_s=2").pass());
  c.set("top", "2");
  CHECK_THROWS(run_experiment("profile_curve", c));
}

TEST_CASE("fbm image of a single point is a point") {
  Config c;
  c.set("set", "point");
  c.set("hurst", "0.5");
  c.set("replicates", "3");
  const ExperimentReport r = run_experiment("verify_fbm_theorem", c);
  const Table* s = r.table("summary");
  REQUIRE(s);
  CHECK(cell(*s, 0, "median") == 0.0);
  CHECK(find_check(r, "analytic_H=0.5").pass());
}

TEST_CASE("image to set ratio on a single point is one") {
  Config c;
  c.set("set", "point");
  c.set("replicates", "2");
  c.set("n", "1024");
  const ExperimentReport r = run_experiment("verify_lb1", c);
  const Table* t = r.table("ratios");
  REQUIRE(t);
  for (std::size_t i = 0; i < t->rows.size(); ++i) CHECK(cell(*t, i, "ratio") == 1.0);
  CHECK(r.passed());
}

TEST_CASE("sandwich on a single-cell set") {
  Config c;
  c.set("set", "cantor");
  c.set("level", "2");
  c.set("n", "1");
  c.set("fine_factor", "1");
  c.set("samples", "5");
  const ExperimentReport r = run_experiment("verify_sandwich", c);
  const Table* t = r.table("sandwich");
  REQUIRE(t);
  // one cell: the coarse and fine clouds both hold only the origin
  for (std::size_t i = 0; i < t->rows.size(); ++i) {
    CHECK(cell(*t, i, "z_coarse") == 1.0);
    CHECK(cell(*t, i, "z_fine") == 1.0);
  }
  CHECK(r.passed());
}

TEST_CASE("experiments are pure functions of their config") {
  const ExperimentReport a = run_experiment("verify_sandwich", Config{});
  const ExperimentReport b = run_experiment("verify_sandwich", Config{});
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(a.tables[i].rows == b.tables[i].rows);
  CHECK(a.config.hash() == b.config.hash());
  Config other;
  other.set("seed", "7");
  CHECK(run_experiment("verify_sandwich", other).config.hash() != a.config.hash());
}

TEST_CASE("reports: verdicts recomputable from the persisted files") {
  const auto dir = std::filesystem::temp_directory_path() / "dimprof-test-reports";
  std::filesystem::remove_all(dir);
  Config c;
  c.set("output_dir", dir.string());
  const ExperimentReport r = run_experiment("verify_entropy_identity", c);
  const auto written = emit_report(r, ReportFormat::both);
  CHECK(written.size() == 3);
  for (const auto& p : written) {
    CHECK(std::filesystem::exists(p));
    CHECK(p.find(r.config.hash()) != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(p + ".tmp"));
  }
  std::ifstream in(dir / ("verify_entropy_identity-" + r.config.hash() + ".json"));
  const auto j = nlohmann::json::parse(in);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["config"]["experiment"] == "verify_entropy_identity");
  CHECK(j["passed"] == r.passed());
  // recompute the worst deviation from the table rows
  const auto& cols = j["tables"]["pairs"]["columns"];
  std::size_t dev_col = 0;
  while (cols[dev_col] != "deviation") ++dev_col;
  double worst = 0.0;
  for (const auto& row : j["tables"]["pairs"]["rows"]) worst = std::max(worst, row[dev_col].get<double>());
  CHECK(worst == find_check(r, "max_deviation").value);
  CHECK_THROWS(parse_report_format("xml"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("profile reports carry the regularity note") {
  Config c;
  c.set("level", "8");
  const ExperimentReport r = run_experiment("profile_curve", c);
  CHECK(std::find(r.notes.begin(), r.notes.end(), std::string(kRegularityNote)) != r.notes.end());
}
