#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace dklms {

// Undirected connected graph over nodes 0..K-1. Neighborhoods are
// self-inclusive: N_k = {k} and every edge endpoint of k.
class Topology {
 public:
  // Explicit edge list. Throws std::invalid_argument on out-of-range nodes,
  // self-loops, or a disconnected graph (diagnostic names the offender).
  static Topology from_edges(int num_nodes,
                             std::vector<std::pair<int, int>> edges);

  // Erdos-Renyi draw, resampled (at most max_retries times) until connected;
  // deterministic given the seed. Throws if connectivity is never reached.
  static Topology random(int num_nodes, double edge_prob, std::uint64_t seed,
                         int max_retries = 64);

  int num_nodes() const { return num_nodes_; }
  // Normalized (k < l), sorted, duplicate-free.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  // Sorted, self-inclusive.
  const std::vector<int>& neighborhood(int k) const { return neighbors_[k]; }
  bool are_neighbors(int k, int l) const;

 private:
  Topology() = default;

  int num_nodes_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

// Row-stochastic cooperation weights supported exactly on self-inclusive
// neighborhoods: a(k,l) > 0 iff l in N_k.
struct CombinationMatrix {
  Eigen::MatrixXd weights;
};

// a(k,l) = 1 / max(|N_k|, |N_l|) for neighbors l != k, self-weight absorbs
// the remainder; symmetric and doubly stochastic.
CombinationMatrix metropolis_weights(const Topology& topology);

// Precomputed powers W(1)..W(max_power) of the combination matrix.
// masked == true zeroes [A^p](k,l) for l outside N_k after each power is
// formed, with no renormalization.
class PropagationWeights {
 public:
  static PropagationWeights build(const CombinationMatrix& a,
                                  const Topology& topology, int max_power,
                                  bool mask_one_hop);

  // Unmasked powers of an arbitrary row-stochastic matrix; support is not
  // checked against any topology. Serves identity-cooperation baselines.
  static PropagationWeights from_matrix(const Eigen::MatrixXd& a,
                                        int max_power);

  int max_power() const { return static_cast<int>(matrices_.size()); }
  bool masked() const { return masked_; }
  int num_nodes() const { return num_nodes_; }
  // p in [1, max_power]
  const Eigen::MatrixXd& power(int p) const { return matrices_[p - 1]; }

 private:
  PropagationWeights() = default;

  int num_nodes_ = 0;
  bool masked_ = false;
  std::vector<Eigen::MatrixXd> matrices_;
};

}  // namespace dklms
