#include "dklms/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dklms/rng.hpp"

namespace dklms {
namespace {

std::vector<std::vector<int>> build_neighborhoods(
    int num_nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> nbrs(num_nodes);
  for (int k = 0; k < num_nodes; ++k) nbrs[k].push_back(k);
  for (const auto& [a, b] : edges) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  for (auto& n : nbrs) std::sort(n.begin(), n.end());
  return nbrs;
}

// Returns the first node unreachable from node 0, or -1 if connected.
int first_unreachable(int num_nodes,
                      const std::vector<std::vector<int>>& nbrs) {
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (int l : nbrs[k]) {
      if (!seen[l]) {
        seen[l] = 1;
        stack.push_back(l);
      }
    }
  }
  for (int k = 0; k < num_nodes; ++k) {
    if (!seen[k]) return k;
  }
  return -1;
}

}  // namespace

Topology Topology::from_edges(int num_nodes,
                              std::vector<std::pair<int, int>> edges) {
  if (num_nodes < 1) {
    throw std::invalid_argument("topology: num_nodes must be >= 1");
  }
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes) {
      throw std::invalid_argument(
          "topology: edge references node outside 0.." +
          std::to_string(num_nodes - 1));
    }
    if (a == b) {
      throw std::invalid_argument("topology: self-loop at node " +
                                  std::to_string(a));
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Topology t;
  t.num_nodes_ = num_nodes;
  t.edges_ = std::move(edges);
  t.neighbors_ = build_neighborhoods(num_nodes, t.edges_);
  const int missing = first_unreachable(num_nodes, t.neighbors_);
  if (missing >= 0) {
    throw std::invalid_argument("topology: node " + std::to_string(missing) +
                                " disconnected");
  }
  return t;
}

Topology Topology::random(int num_nodes, double edge_prob, std::uint64_t seed,
                          int max_retries) {
  if (num_nodes < 1) {
    throw std::invalid_argument("topology: num_nodes must be >= 1");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("topology: edge_prob must be in [0,1]");
  }
  rng::Generator gen(seed);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    // Pairs are visited in lexicographic order so the draw sequence, and
    // hence the sampled graph, is a pure function of the seed.
    for (int a = 0; a < num_nodes; ++a) {
      for (int b = a + 1; b < num_nodes; ++b) {
        if (gen.uniform() < edge_prob) edges.emplace_back(a, b);
      }
    }
    const auto nbrs = build_neighborhoods(num_nodes, edges);
    if (first_unreachable(num_nodes, nbrs) < 0) {
      Topology t;
      t.num_nodes_ = num_nodes;
      t.edges_ = std::move(edges);
      t.neighbors_ = nbrs;
      return t;
    }
  }
  throw std::runtime_error(
      "topology: random graph not connected after " +
      std::to_string(max_retries + 1) + " attempts");
}

bool Topology::are_neighbors(int k, int l) const {
  const auto& n = neighbors_[k];
  return std::binary_search(n.begin(), n.end(), l);
}

CombinationMatrix metropolis_weights(const Topology& topology) {
  const int k_nodes = topology.num_nodes();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k_nodes, k_nodes);
  for (int k = 0; k < k_nodes; ++k) {
    const auto& nk = topology.neighborhood(k);
    double off_sum = 0.0;
    for (int l : nk) {
      if (l == k) continue;
      const double a = 1.0 / static_cast<double>(std::max(
                           nk.size(), topology.neighborhood(l).size()));
      w(k, l) = a;
      off_sum += a;
    }
    w(k, k) = 1.0 - off_sum;
  }
  return CombinationMatrix{std::move(w)};
}

PropagationWeights PropagationWeights::build(const CombinationMatrix& a,
                                             const Topology& topology,
                                             int max_power,
                                             bool mask_one_hop) {
  if (max_power < 1) {
    throw std::invalid_argument("propagation_weights: max_power must be >= 1");
  }
  const int k_nodes = topology.num_nodes();
  if (a.weights.rows() != k_nodes || a.weights.cols() != k_nodes) {
    throw std::invalid_argument(
        "propagation_weights: matrix size does not match topology");
  }
  PropagationWeights pw;
  pw.num_nodes_ = k_nodes;
  pw.masked_ = mask_one_hop;
  pw.matrices_.reserve(max_power);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(k_nodes, k_nodes);
  for (int q = 1; q <= max_power; ++q) {
    p = p * a.weights;  // exact power ladder; masking never feeds back
    Eigen::MatrixXd w = p;
    if (mask_one_hop) {
      for (int k = 0; k < k_nodes; ++k) {
        for (int l = 0; l < k_nodes; ++l) {
          if (!topology.are_neighbors(k, l)) w(k, l) = 0.0;
        }
      }
    }
    pw.matrices_.push_back(std::move(w));
  }
  return pw;
}

PropagationWeights PropagationWeights::from_matrix(const Eigen::MatrixXd& a,
                                                   int max_power) {
  if (max_power < 1) {
    throw std::invalid_argument("propagation_weights: max_power must be >= 1");
  }
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("propagation_weights: matrix must be square");
  }
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    if (a.row(k).minCoeff() < 0.0 ||
        std::abs(a.row(k).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "propagation_weights: row " + std::to_string(k) +
          " is not a probability vector");
    }
  }
  PropagationWeights pw;
  pw.num_nodes_ = static_cast<int>(a.rows());
  pw.masked_ = false;
  pw.matrices_.reserve(max_power);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int q = 1; q <= max_power; ++q) {
    p = p * a;
    pw.matrices_.push_back(p);
  }
  return pw;
}

}  // namespace dklms
