#include "dklms/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "dklms/rng.hpp"

namespace dklms {

void NodeDataParams::validate() const {
  // Sampling draws chi from [0.5, 1]; the struct additionally admits
  // degenerate scales down to 0 (zero input) for fixed-point checks.
  if (!(input_variance_scale >= 0.0 && input_variance_scale <= 1.0)) {
    throw std::invalid_argument("node params: chi must lie in [0, 1]");
  }
  if (!(noise_variance >= 0.0)) {
    throw std::invalid_argument("node params: noise variance must be >= 0");
  }
  if (!std::isfinite(initial_output)) {
    throw std::invalid_argument("node params: initial output must be finite");
  }
}

std::vector<NodeDataParams> sample_node_params(
    int num_nodes, std::uint64_t seed, const NodeDataParams& prototype) {
  if (num_nodes < 1) {
    throw std::invalid_argument("sample_node_params: num_nodes must be >= 1");
  }
  rng::Generator gen(seed);
  std::vector<NodeDataParams> out(num_nodes, prototype);
  for (auto& p : out) {
    p.input_variance_scale = gen.uniform(0.5, 1.0);
    p.validate();
  }
  return out;
}

ObservationStream generate_nonlinear_stream(
    const std::vector<NodeDataParams>& params, int steps, int regressor_window,
    std::uint64_t seed) {
  if (params.empty()) {
    throw std::invalid_argument("stream: need at least one node");
  }
  if (steps < 1) {
    throw std::invalid_argument("stream: steps must be >= 1");
  }
  if (regressor_window < 1) {
    throw std::invalid_argument("stream: regressor window must be >= 1");
  }
  for (const auto& p : params) p.validate();

  const int k_nodes = static_cast<int>(params.size());
  const int w = regressor_window;
  ObservationStream s;
  s.num_nodes = k_nodes;
  s.steps = steps;
  s.dim = w;
  s.raw_input.resize(steps, k_nodes);
  s.desired.resize(steps, k_nodes);
  s.clean_output.resize(steps, k_nodes);
  s.regressors.assign(steps, Eigen::MatrixXd::Zero(w, k_nodes));

  Eigen::VectorXd input_std(k_nodes), noise_std(k_nodes), y(k_nodes);
  for (int k = 0; k < k_nodes; ++k) {
    input_std(k) = std::sqrt(0.1 * params[k].input_variance_scale);
    noise_std(k) = std::sqrt(params[k].noise_variance);
    y(k) = params[k].initial_output;
  }

  rng::Generator gen(seed);
  for (int n = 0; n < steps; ++n) {
    for (int k = 0; k < k_nodes; ++k) {
      s.raw_input(n, k) = input_std(k) * gen.gaussian();
    }
    for (int k = 0; k < k_nodes; ++k) {
      const double x = s.raw_input(n, k);
      y(k) = y(k) / (1.0 + y(k) * y(k)) + x * x * x;
      s.clean_output(n, k) = y(k);
      // Unconditional draw: sigma = 0 still consumes one Gaussian, so the
      // per-step draw order (K inputs, then K noises) never depends on the
      // noise level and clean/noisy streams share their input sequence.
      const double v = noise_std(k) * gen.gaussian();
      s.desired(n, k) = y(k) + v;
      for (int j = 0; j < w && j <= n; ++j) {
        s.regressors[n](j, k) = s.raw_input(n - j, k);
      }
    }
  }
  return s;
}

ObservationStream generate_linear_stream(
    const Eigen::VectorXd& w_star, const std::vector<NodeDataParams>& params,
    int steps, std::uint64_t seed) {
  if (w_star.size() < 1) {
    throw std::invalid_argument("linear stream: w_star dimension must be >= 1");
  }
  if (params.empty()) {
    throw std::invalid_argument("stream: need at least one node");
  }
  if (steps < 1) {
    throw std::invalid_argument("stream: steps must be >= 1");
  }
  for (const auto& p : params) p.validate();

  const int k_nodes = static_cast<int>(params.size());
  const int m = static_cast<int>(w_star.size());
  ObservationStream s;
  s.num_nodes = k_nodes;
  s.steps = steps;
  s.dim = m;
  s.raw_input.resize(steps, k_nodes);
  s.desired.resize(steps, k_nodes);
  s.clean_output.resize(steps, k_nodes);
  s.regressors.assign(steps, Eigen::MatrixXd::Zero(m, k_nodes));

  rng::Generator gen(seed);
  for (int n = 0; n < steps; ++n) {
    for (int k = 0; k < k_nodes; ++k) {
      const double sd = std::sqrt(0.1 * params[k].input_variance_scale);
      for (int j = 0; j < m; ++j) {
        s.regressors[n](j, k) = sd * gen.gaussian();
      }
      s.raw_input(n, k) = s.regressors[n](0, k);
    }
    for (int k = 0; k < k_nodes; ++k) {
      const double clean = w_star.dot(s.regressors[n].col(k));
      const double sd = std::sqrt(params[k].noise_variance);
      s.clean_output(n, k) = clean;
      s.desired(n, k) = clean + sd * gen.gaussian();
    }
  }
  return s;
}

}  // namespace dklms
