#pragma once

#include <Eigen/Core>
#include <deque>
#include <vector>

#include "dklms/graph.hpp"
#include "dklms/kernel.hpp"

namespace dklms {

// One whole-network expansion term: every node's regressor at time_index and
// the scaled errors g[l] = mu_l * e_l(time_index).
struct DictionarySlot {
  long time_index = 0;          // n >= 1
  Eigen::MatrixXd regressors;   // m x K, column per node
  Eigen::VectorXd scaled_errors;  // K

  Eigen::VectorXd col_sq_norms;  // cached ||x_l||^2 per node (derived)
};

// FIFO ring of whole-network slots; after step n it holds exactly the
// indices max(1, n-L+1)..n.
class KernelBuffer {
 public:
  explicit KernelBuffer(int capacity);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(slots_.size()); }
  // Oldest first.
  const DictionarySlot& slot(int i) const { return slots_[i]; }

  void push(DictionarySlot slot);  // evicts the oldest slot when full

 private:
  int capacity_;
  std::deque<DictionarySlot> slots_;
};

// Diffusion KLMS over a network. The function iterate is represented by the
// buffer of expansion slots; node responses weight slot terms by the cached
// combination-matrix powers (age n-i at prediction time).
class DklmsState {
 public:
  DklmsState(PropagationWeights weights, Eigen::VectorXd step_sizes,
             KernelParams kernel, int buffer_capacity);

  // f_{k, n-1} evaluated at each node's regressor for step n; zero vector
  // while the buffer is empty.
  Eigen::VectorXd predict(const Eigen::MatrixXd& inputs) const;

  // Returns the a-priori errors e_k(n) and appends the step-n slot.
  Eigen::VectorXd step(const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXd& desired);

  long step_count() const { return step_count_; }
  int num_nodes() const { return weights_.num_nodes(); }
  const KernelBuffer& buffer() const { return buffer_; }
  const PropagationWeights& weights() const { return weights_; }

 private:
  PropagationWeights weights_;
  Eigen::VectorXd step_sizes_;
  KernelParams kernel_;
  KernelBuffer buffer_;
  long step_count_ = 0;

  // Per-call scratch; states are single-owner within a trial.
  mutable Eigen::MatrixXd sqdist_, kmat_;
  mutable Eigen::VectorXd query_sq_norms_;
};

// Centralized KLMS: growing expansion over past (input, error) pairs.
// capacity 0 keeps every center; a positive capacity keeps the most recent
// ones (used by the per-node non-cooperative baseline).
class KlmsState {
 public:
  KlmsState(double step_size, KernelParams kernel, int capacity = 0);

  double predict(const Regressor& input) const;
  // Returns (error, prediction) for the step and appends the new center.
  std::pair<double, double> step(const Regressor& input, double desired);

  long step_count() const { return step_count_; }
  int size() const { return static_cast<int>(centers_.size()); }
  const Regressor& center(int i) const { return centers_[i]; }  // oldest first
  double error(int i) const { return errors_[i]; }

 private:
  double step_size_;
  KernelParams kernel_;
  int capacity_;
  std::deque<Regressor> centers_;
  std::deque<double> errors_;
  long step_count_ = 0;
};

// K independent KLMS filters advanced on the same clock.
Eigen::VectorXd noncoop_klms_step(std::vector<KlmsState>& states,
                                  const Eigen::MatrixXd& inputs,
                                  const Eigen::VectorXd& desired);

// Linear diffusion LMS, adapt-then-combine.
class LinearDlmsState {
 public:
  LinearDlmsState(CombinationMatrix combination, Eigen::VectorXd step_sizes,
                  int dim);

  // Returns the a-priori errors; adapts every node then combines.
  Eigen::VectorXd step(const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXd& desired);

  // Column per node.
  const Eigen::MatrixXd& estimates() const { return estimates_; }

 private:
  CombinationMatrix combination_;
  Eigen::VectorXd step_sizes_;
  Eigen::MatrixXd estimates_;  // m x K
};

// J = (desired - prediction)^2 / 2
double instantaneous_loss(double desired, double prediction);

}  // namespace dklms
