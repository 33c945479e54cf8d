#include "dimprof/config.hpp"

#include <doctest.h>

#include <sstream>

using namespace dimprof;

namespace {

Config from_text(const std::string& text) {
  std::istringstream is(text);
  return Config::parse(is);
}

}  // namespace

TEST_CASE("parse entries, comments and quotes") {
  const Config c = from_text(
      "# experiment settings\n"
      "\n"
      "  level = 10   # trailing comment\n"
      "ratio=0.2\n"
      "label = \"a # b\"\n"
      "orders = 0.3, 1 ,inf\n"
      "flag = yes\n"
      "level = 7\n");
  CHECK(c.get_long("level") == 7);
  CHECK(c.get_double("ratio") == 0.2);
  CHECK(c.get("label") == "a # b");
  CHECK(c.get_bool("flag"));
  const auto orders = c.get_orders("orders");
  REQUIRE(orders.size() == 3);
  CHECK(orders[0].value() == 0.3);
  CHECK(orders[2].is_infinite());
  CHECK(c.get_doubles("ratio") == std::vector<double>{0.2});
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(from_text("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(from_text("1bad = 3\n"), ConfigError);
  CHECK_THROWS_AS(from_text("q = \"open\n"), ConfigError);
  const Config c = from_text("x = abc\nn = 3.5\n");
  CHECK_THROWS_AS(c.get_double("x"), ConfigError);
  CHECK_THROWS_AS(c.get_long("n"), ConfigError);
  CHECK_THROWS_AS(c.get("missing"), ConfigError);
  CHECK_THROWS_AS(c.get_bool("x"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("overrides and defaults") {
  Config c = from_text("a = 1\n");
  c.apply_override("b=2");
  c.apply_override("a = 5");
  Config d;
  d.set("a", "100");
  d.set("c", "3");
  c.merge_defaults(d);
  CHECK(c.get_long("a") == 5);
  CHECK(c.get_long("b") == 2);
  CHECK(c.get_long("c") == 3);
  CHECK_THROWS_AS(c.apply_override("novalue"), ConfigError);
}

TEST_CASE("hash is stable under entry order and sensitive to values") {
  const Config a = from_text("x = 1\ny = 2\n");
  const Config b = from_text("y = 2\n# comment\nx = 1\n");
  const Config c = from_text("x = 1\ny = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
  CHECK(a.canonical() == "x = 1\ny = 2\n");
}
