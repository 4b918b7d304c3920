#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "dklms/kernel.hpp"

namespace dklms {

struct NodeDataParams {
  double input_variance_scale = 0.75;  // chi_k in [0, 1]; sampled in [0.5, 1]
  double noise_variance = 1e-3;        // sigma_v^2 >= 0 (0 = noiseless)
  double initial_output = 0.0;         // y_k(0)

  void validate() const;  // throws std::invalid_argument
};

// Column-per-node storage; step n lives at row/entry n-1.
struct ObservationStream {
  int num_nodes = 0;
  int steps = 0;
  int dim = 0;  // regressor dimension m

  Eigen::MatrixXd raw_input;              // N x K, x_k(n)
  std::vector<Eigen::MatrixXd> regressors;  // per step: m x K
  Eigen::MatrixXd desired;                // N x K, d_k(n)
  Eigen::MatrixXd clean_output;           // N x K, y_k(n)

  // Node k's regressor at step n (1-based).
  Regressor regressor(int n, int k) const { return regressors[n - 1].col(k); }
};

// chi_k ~ Uniform[0.5, 1] i.i.d. (ascending node order); noise variance and
// initial output are copied from the prototype.
std::vector<NodeDataParams> sample_node_params(int num_nodes,
                                               std::uint64_t seed,
                                               const NodeDataParams& prototype);

// Nonlinear benchmark plant, per node:
//   x_k(n) ~ Gaussian(0, 0.1 * chi_k)
//   y_k(n) = y_k(n-1) / (1 + y_k(n-1)^2) + x_k(n)^3
//   d_k(n) = y_k(n) + v_k(n),  v_k(n) ~ Gaussian(0, sigma_v^2)
// Regressor at step n: [x_k(n), x_k(n-1), ..., x_k(n-w+1)], zero-padded for
// n < w. Draw order per step: K input draws, then K noise draws.
ObservationStream generate_nonlinear_stream(
    const std::vector<NodeDataParams>& params, int steps, int regressor_window,
    std::uint64_t seed);

// Linear validation model: x_k(n) ~ Gaussian(0, 0.1 * chi_k * I_m),
// d_k(n) = w_star' x_k(n) + v_k(n). The regressor is x_k(n) itself.
ObservationStream generate_linear_stream(
    const Eigen::VectorXd& w_star, const std::vector<NodeDataParams>& params,
    int steps, std::uint64_t seed);

}  // namespace dklms
