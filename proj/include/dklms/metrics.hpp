#pragma once

#include <Eigen/Core>
#include <vector>

#include "dklms/kernel.hpp"

namespace dklms {

// Pointwise mean over trials of the node-averaged squared error.
// per_trial_errors: one N x K matrix of raw errors per trial (equal shapes).
std::vector<double> average_mse(
    const std::vector<Eigen::MatrixXd>& per_trial_errors);

struct RegretResult {
  std::vector<double> regret;  // R(n) = sum_{i<=n} (alg_loss_i - cmp_loss_i)
  double slope = 0.0;  // least-squares slope of log max(R,1) vs log n over
                       // the second half of the run
};

// Inputs are networkwise per-step losses (sum over nodes of J) for the
// algorithm and for a fixed comparator evaluated on the same stream.
RegretResult empirical_regret(const std::vector<double>& algorithm_losses,
                              const std::vector<double>& comparator_losses);

// Batch kernel ridge regressor: alpha = (G + ridge I)^{-1} targets.
// Serves as the fixed comparator g for the regret metric.
class KrrComparator {
 public:
  // centers: m x S, column per sample.
  KrrComparator(KernelParams kernel, Eigen::MatrixXd centers,
                const Eigen::VectorXd& targets, double ridge);

  double predict(const Regressor& input) const;
  // Column-per-query batch evaluation.
  Eigen::VectorXd predict_batch(const Eigen::MatrixXd& inputs) const;

  int num_centers() const { return static_cast<int>(centers_.cols()); }

 private:
  KernelParams kernel_;
  Eigen::MatrixXd centers_;       // m x S
  Eigen::VectorXd center_sq_norms_;
  Eigen::VectorXd alpha_;
};

}  // namespace dklms
