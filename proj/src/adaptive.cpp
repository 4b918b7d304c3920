#include "dklms/adaptive.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dklms {

KernelBuffer::KernelBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) {
    throw std::invalid_argument("kernel buffer: capacity must be >= 1");
  }
}

void KernelBuffer::push(DictionarySlot slot) {
  if (static_cast<int>(slots_.size()) == capacity_) slots_.pop_front();
  slots_.push_back(std::move(slot));
}

DklmsState::DklmsState(PropagationWeights weights, Eigen::VectorXd step_sizes,
                       KernelParams kernel, int buffer_capacity)
    : weights_(std::move(weights)),
      step_sizes_(std::move(step_sizes)),
      kernel_(kernel),
      buffer_(buffer_capacity) {
  if (step_sizes_.size() != weights_.num_nodes()) {
    throw std::invalid_argument("dklms: step-size vector size != num nodes");
  }
  if (step_sizes_.minCoeff() <= 0.0) {
    throw std::invalid_argument("dklms: step sizes must be > 0");
  }
  if (weights_.max_power() < buffer_capacity) {
    throw std::invalid_argument(
        "dklms: propagation weights cover fewer powers than the buffer");
  }
}

Eigen::VectorXd DklmsState::predict(const Eigen::MatrixXd& inputs) const {
  const int k_nodes = num_nodes();
  if (inputs.cols() != k_nodes) {
    throw std::invalid_argument("dklms: inputs must have one column per node");
  }
  Eigen::VectorXd response = Eigen::VectorXd::Zero(k_nodes);
  if (buffer_.size() == 0) return response;
  if (inputs.rows() != buffer_.slot(0).regressors.rows()) {
    throw std::invalid_argument(
        "dklms: regressor dimension differs from stored slots");
  }

  const long n = step_count_ + 1;
  query_sq_norms_ = inputs.colwise().squaredNorm();
  for (int i = 0; i < buffer_.size(); ++i) {
    const DictionarySlot& slot = buffer_.slot(i);
    const int age = static_cast<int>(n - slot.time_index);  // in [1, L]
    // ||x_l(i) - x_k(n)||^2 for all node pairs, then the Gaussian kernel.
    sqdist_ = slot.col_sq_norms.replicate(1, k_nodes) +
              query_sq_norms_.transpose().replicate(k_nodes, 1) -
              2.0 * (slot.regressors.transpose() * inputs);
    kmat_ = (-kernel_.bandwidth * sqdist_.cwiseMax(0.0)).array().exp();
    // response_k += sum_l W(age)(k,l) * g(l) * kappa(x_l(i), x_k(n))
    response.noalias() +=
        weights_.power(age).cwiseProduct(kmat_.transpose()) *
        slot.scaled_errors;
  }
  return response;
}

Eigen::VectorXd DklmsState::step(const Eigen::MatrixXd& inputs,
                                 const Eigen::VectorXd& desired) {
  if (desired.size() != num_nodes()) {
    throw std::invalid_argument("dklms: desired vector size != num nodes");
  }
  if (!desired.allFinite()) {
    throw std::invalid_argument("dklms: non-finite desired value");
  }
  Eigen::VectorXd errors = desired - predict(inputs);
  DictionarySlot slot;
  slot.time_index = ++step_count_;
  slot.regressors = inputs;
  slot.scaled_errors = step_sizes_.cwiseProduct(errors);
  slot.col_sq_norms = inputs.colwise().squaredNorm();
  buffer_.push(std::move(slot));
  return errors;
}

KlmsState::KlmsState(double step_size, KernelParams kernel, int capacity)
    : step_size_(step_size), kernel_(kernel), capacity_(capacity) {
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("klms: step size must be > 0");
  }
  if (capacity < 0) {
    throw std::invalid_argument("klms: capacity must be >= 0");
  }
}

double KlmsState::predict(const Regressor& input) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    acc += errors_[i] * kernel_eval(kernel_, centers_[i], input);
  }
  return step_size_ * acc;
}

std::pair<double, double> KlmsState::step(const Regressor& input,
                                          double desired) {
  if (!std::isfinite(desired)) {
    throw std::invalid_argument("klms: non-finite desired value");
  }
  const double prediction = predict(input);
  const double error = desired - prediction;
  if (capacity_ > 0 && static_cast<int>(centers_.size()) == capacity_) {
    centers_.pop_front();
    errors_.pop_front();
  }
  centers_.push_back(input);
  errors_.push_back(error);
  ++step_count_;
  return {error, prediction};
}

Eigen::VectorXd noncoop_klms_step(std::vector<KlmsState>& states,
                                  const Eigen::MatrixXd& inputs,
                                  const Eigen::VectorXd& desired) {
  const int k_nodes = static_cast<int>(states.size());
  if (inputs.cols() != k_nodes || desired.size() != k_nodes) {
    throw std::invalid_argument("noncoop: node count mismatch");
  }
  Eigen::VectorXd errors(k_nodes);
  for (int k = 0; k < k_nodes; ++k) {
    errors(k) = states[k].step(inputs.col(k), desired(k)).first;
  }
  return errors;
}

LinearDlmsState::LinearDlmsState(CombinationMatrix combination,
                                 Eigen::VectorXd step_sizes, int dim)
    : combination_(std::move(combination)),
      step_sizes_(std::move(step_sizes)) {
  const Eigen::Index k_nodes = combination_.weights.rows();
  if (step_sizes_.size() != k_nodes) {
    throw std::invalid_argument("dlms: step-size vector size != num nodes");
  }
  if (step_sizes_.minCoeff() <= 0.0) {
    throw std::invalid_argument("dlms: step sizes must be > 0");
  }
  if (dim < 1) {
    throw std::invalid_argument("dlms: dimension must be >= 1");
  }
  estimates_ = Eigen::MatrixXd::Zero(dim, k_nodes);
}

Eigen::VectorXd LinearDlmsState::step(const Eigen::MatrixXd& inputs,
                                      const Eigen::VectorXd& desired) {
  const Eigen::Index k_nodes = estimates_.cols();
  if (inputs.rows() != estimates_.rows() || inputs.cols() != k_nodes ||
      desired.size() != k_nodes) {
    throw std::invalid_argument("dlms: input shape mismatch");
  }
  Eigen::VectorXd errors(k_nodes);
  Eigen::MatrixXd adapted(estimates_.rows(), k_nodes);
  for (Eigen::Index k = 0; k < k_nodes; ++k) {
    errors(k) = desired(k) - estimates_.col(k).dot(inputs.col(k));
    adapted.col(k) =
        estimates_.col(k) + step_sizes_(k) * errors(k) * inputs.col(k);
  }
  // w_k(n) = sum_{l in N_k} a(k,l) psi_l
  estimates_.noalias() = adapted * combination_.weights.transpose();
  return errors;
}

double instantaneous_loss(double desired, double prediction) {
  const double e = desired - prediction;
  return 0.5 * e * e;
}

}  // namespace dklms
