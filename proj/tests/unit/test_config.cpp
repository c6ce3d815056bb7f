#include "doctest.h"
#include "mshom/config.hpp"
#include "mshom/error.hpp"

using namespace mshom;

TEST_CASE("defaults round-trip through write and parse") {
  RunConfig cfg;
  const RunConfig back = parse_config_text(cfg.text());
  CHECK(back == cfg);
}

TEST_CASE("modified config round-trips") {
  RunConfig cfg;
  cfg.instance = "oscillatory";
  cfg.dimension = 2;
  cfg.epsilon = {0.5, 0.25, 0.125};
  cfg.seed = 998877;
  cfg.plot = true;
  cfg.khas_delta = {0.05, 0.1};
  cfg.noise_q0 = 0.375;
  cfg.forcing = "sine";
  const RunConfig back = parse_config_text(cfg.text());
  CHECK(back == cfg);
}

TEST_CASE("lists parse element by element") {
  const auto cfg = parse_config_text("[run]\nepsilon = 0.2, 0.1, 0.05\n");
  REQUIRE(cfg.epsilon.size() == 3);
  CHECK(cfg.epsilon[0] == 0.2);
  CHECK(cfg.epsilon[2] == 0.05);
}

TEST_CASE("unknown keys and sections are named in the error") {
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\ndimenson = 1\n"),
                       doctest::Contains("dimenson"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[rnu]\ndimension = 1\n"), doctest::Contains("rnu"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config_text("dimension = 1\n"), ConfigError);  // before any section
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(parse_config_text("[run]\ndimension = one\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nplot = yes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nepsilon = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run\ndimension = 1\n"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto cfg = parse_config_text(
      "# leading comment\n\n[run]\nseed = 42   # trailing comment\n\n[noise]\nmodes = 3\n");
  CHECK(cfg.seed == 42);
  CHECK(cfg.noise_modes == 3);
}
