#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dklms/graph.hpp"
#include "dklms/kernel.hpp"

namespace dklms {

// Invalid configuration input. The message carries one line per offending
// field ("config: <key>: <problem>").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Algorithm { kDklms, kNoncoopKlms, kLinearDlms, kCentralizedKlms };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);  // throws ConfigError

enum class StreamKind { kNonlinear, kLinear };

struct TopologySpec {
  int nodes = 10;
  bool use_random = false;
  std::vector<std::pair<int, int>> edges;  // used when use_random == false
  double random_edge_prob = 0.4;
  std::uint64_t random_seed = 7;
  int random_max_retries = 64;
};

// Ships the fixed 10-node default network (degrees 3-5, diameter 3).
std::vector<std::pair<int, int>> default_topology_edges();

struct ExperimentConfig {
  int schema_version = 1;
  TopologySpec topology{};
  KernelParams kernel{KernelParams::Family::kGaussian, 1.1};
  double step_size = 0.6;
  int buffer_capacity = 100;
  bool mask_one_hop = true;
  StreamKind stream_kind = StreamKind::kNonlinear;
  double noise_variance = 1e-3;
  int regressor_window = 1;
  double initial_output = 0.0;
  bool resample_chi_per_trial = false;
  int linear_dim = 3;
  int steps = 3000;
  int trials = 100;
  std::uint64_t seed = 20240405;
  std::vector<Algorithm> algorithms = {Algorithm::kDklms,
                                       Algorithm::kNoncoopKlms,
                                       Algorithm::kLinearDlms};
  int threads = 1;  // 0 = hardware concurrency
  std::string output_dir = "out";
  std::string rng_algorithm = "mt19937_64-polar";

  void validate() const;  // throws ConfigError listing every bad field
};

// Flat `key = value` file; '#' starts a comment; unknown keys are errors.
// Overrides are applied after the file's own values (CLI precedence).
ExperimentConfig parse_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});
ExperimentConfig parse_config_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Canonical key order, doubles at 17 significant digits; the output parses
// back to an identical config (the run manifest relies on this).
std::string serialize_config(const ExperimentConfig& cfg);

// Builds the topology described by cfg.topology; wraps construction
// failures (disconnected edge list, bad nodes) in ConfigError.
Topology resolve_topology(const ExperimentConfig& cfg);

}  // namespace dklms
