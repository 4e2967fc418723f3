#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aatomo/config.hpp"

using namespace aatomo;

TEST_CASE("defaults are the desk scale") {
  const RunConfig c;
  CHECK(c.n_boundary == 512);
  CHECK(c.n_angles == 256);
  CHECK(c.n_mode == 64);
  CHECK(c.m_seq == 32);
  CHECK(c.k_h == 24);
  CHECK(c.pitch == 1.0 / 128.0);
  CHECK(c.mask_margin == 0.05);
  CHECK(c.attenuated());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parsing with comments and blank lines") {
  const RunConfig c = parse_config("# run\n\nn_boundary = 256   # boundary nodes\n  seed=42\nattenuation = none\n");
  CHECK(c.n_boundary == 256);
  CHECK(c.seed == 42);
  CHECK_FALSE(c.attenuated());
  CHECK(c.n_angles == 256);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_boundary 256\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_boundary = 25x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("pitch = abc\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/aatomo.cfg"), FormatError);
}

TEST_CASE("round trip through text") {
  RunConfig c;
  c.n_mode = 48;
  c.m_seq = 20;
  c.pitch = 1.0 / 96.0;
  c.scenario = "random";
  c.seed = 1234567890123ULL;
  const RunConfig d = parse_config(dump_config(c));
  CHECK(d.n_mode == 48);
  CHECK(d.m_seq == 20);
  CHECK(d.pitch == c.pitch);
  CHECK(d.scenario == "random");
  CHECK(d.seed == c.seed);
  CHECK(dump_config(d) == dump_config(c));
}

TEST_CASE("inconsistent sizes fail validation") {
  CHECK_THROWS_AS(parse_config("n_mode = 200\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("m_seq = 40\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_boundary = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("attenuation = linear\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("pitch = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("m_max = 33\n"), ConfigError);
}
