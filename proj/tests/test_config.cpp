#include <doctest.h>

#include <string>

#include "dklms/config.hpp"

using dklms::Algorithm;
using dklms::ConfigError;
using dklms::ExperimentConfig;
using dklms::parse_config_text;
using dklms::serialize_config;
using dklms::StreamKind;

TEST_CASE("empty text yields the documented defaults") {
  const auto cfg = parse_config_text("");
  CHECK(cfg.topology.nodes == 10);
  CHECK(cfg.kernel.bandwidth == 1.1);
  CHECK(cfg.step_size == 0.6);
  CHECK(cfg.buffer_capacity == 100);
  CHECK(cfg.mask_one_hop == true);
  CHECK(cfg.stream_kind == StreamKind::kNonlinear);
  CHECK(cfg.noise_variance == 1e-3);
  CHECK(cfg.regressor_window == 1);
  CHECK(cfg.steps == 3000);
  CHECK(cfg.trials == 100);
  CHECK(cfg.algorithms ==
        std::vector<Algorithm>{Algorithm::kDklms, Algorithm::kNoncoopKlms,
                               Algorithm::kLinearDlms});
  CHECK(cfg.rng_algorithm == "mt19937_64-polar");
}

TEST_CASE("values, comments, and whitespace parse") {
  const auto cfg = parse_config_text(
      "# a comment\n"
      "kernel.bandwidth = 2.5   # trailing comment\n"
      "\n"
      "  run.trials=7\n"
      "adaptive.mask_one_hop = false\n"
      "run.algorithms = dklms , centralized_klms\n"
      "stream.kind = linear\n");
  CHECK(cfg.kernel.bandwidth == 2.5);
  CHECK(cfg.trials == 7);
  CHECK(cfg.mask_one_hop == false);
  CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::kDklms,
                                                 Algorithm::kCentralizedKlms});
  CHECK(cfg.stream_kind == StreamKind::kLinear);
}

TEST_CASE("unknown keys are rejected with the key name") {
  try {
    parse_config_text("kernel.bandwith = 1.0\n");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kernel.bandwith") != std::string::npos);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
}

TEST_CASE("duplicate keys are rejected") {
  CHECK_THROWS_AS(parse_config_text("run.steps = 5\nrun.steps = 6\n"),
                  ConfigError);
}

TEST_CASE("malformed lines carry the line number") {
  try {
    parse_config_text("run.steps = 5\nthis is not a pair\n");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("every invalid field is reported at once") {
  try {
    parse_config_text(
        "kernel.bandwidth = -1\n"
        "adaptive.step_size = 0\n"
        "run.trials = 0\n");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("kernel.bandwidth") != std::string::npos);
    CHECK(what.find("adaptive.step_size") != std::string::npos);
    CHECK(what.find("run.trials") != std::string::npos);
  }
}

TEST_CASE("type errors name the offending value") {
  try {
    parse_config_text("run.steps = soon\n");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("soon") != std::string::npos);
  }
}

TEST_CASE("unsupported rng algorithm is rejected") {
  CHECK_THROWS_AS(parse_config_text("rng.algorithm = lcg\n"), ConfigError);
}

TEST_CASE("overrides replace file values") {
  const auto cfg = parse_config_text("run.steps = 10\n",
                                     {{"run.steps", "25"}, {"run.seed", "9"}});
  CHECK(cfg.steps == 25);
  CHECK(cfg.seed == 9);
}

TEST_CASE("topology edge list round-trips through parse") {
  const auto cfg = parse_config_text(
      "topology.nodes = 3\ntopology.edges = 0-1, 1-2\n");
  CHECK(cfg.topology.edges ==
        std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  const auto t = resolve_topology(cfg);
  CHECK(t.num_nodes() == 3);
}

TEST_CASE("disconnected topology is a config error") {
  const auto cfg = parse_config_text(
      "topology.nodes = 3\ntopology.edges = 0-1\n");
  CHECK_THROWS_AS(resolve_topology(cfg), ConfigError);
}

TEST_CASE("random topology request flows through") {
  const auto cfg = parse_config_text(
      "topology.nodes = 8\ntopology.random.edge_prob = 0.5\n"
      "topology.random.seed = 3\n");
  CHECK(cfg.topology.use_random);
  const auto a = resolve_topology(cfg);
  const auto b = resolve_topology(cfg);
  CHECK(a.edges() == b.edges());
}

TEST_CASE("serialize/parse round-trip preserves every field") {
  auto cfg = parse_config_text(
      "kernel.bandwidth = 0.37\n"
      "adaptive.step_size = 0.123456789012345678\n"
      "stream.noise_variance = 0.1\n"
      "run.seed = 18446744073709551615\n"
      "run.algorithms = linear_dlms,dklms\n"
      "run.output_dir = /tmp/x y\n");
  const std::string text = serialize_config(cfg);
  const auto back = parse_config_text(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.step_size == cfg.step_size);
  CHECK(back.seed == cfg.seed);
  CHECK(back.output_dir == "/tmp/x y");
  CHECK(back.algorithms == cfg.algorithms);
}

TEST_CASE("algorithm names map both ways") {
  for (const auto a :
       {Algorithm::kDklms, Algorithm::kNoncoopKlms, Algorithm::kLinearDlms,
        Algorithm::kCentralizedKlms}) {
    CHECK(dklms::algorithm_from_name(dklms::algorithm_name(a)) == a);
  }
  CHECK_THROWS_AS(dklms::algorithm_from_name("klms2"), ConfigError);
}

TEST_CASE("validate rejects duplicate algorithm selections") {
  ExperimentConfig cfg;
  cfg.algorithms = {Algorithm::kDklms, Algorithm::kDklms};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
