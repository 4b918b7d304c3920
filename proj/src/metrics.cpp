#include "dklms/metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace dklms {

std::vector<double> average_mse(
    const std::vector<Eigen::MatrixXd>& per_trial_errors) {
  if (per_trial_errors.empty()) {
    throw std::invalid_argument("average_mse: no trials");
  }
  const Eigen::Index n = per_trial_errors.front().rows();
  const Eigen::Index k = per_trial_errors.front().cols();
  for (const auto& e : per_trial_errors) {
    if (e.rows() != n || e.cols() != k) {
      throw std::invalid_argument("average_mse: ragged trial records");
    }
  }
  std::vector<double> mse(n, 0.0);
  for (const auto& e : per_trial_errors) {  // ascending trial order
    for (Eigen::Index i = 0; i < n; ++i) {
      mse[i] += e.row(i).squaredNorm() / static_cast<double>(k);
    }
  }
  const double t = static_cast<double>(per_trial_errors.size());
  for (double& v : mse) v /= t;
  return mse;
}

RegretResult empirical_regret(const std::vector<double>& algorithm_losses,
                              const std::vector<double>& comparator_losses) {
  if (algorithm_losses.size() != comparator_losses.size()) {
    throw std::invalid_argument("empirical_regret: loss length mismatch");
  }
  if (algorithm_losses.empty()) {
    throw std::invalid_argument("empirical_regret: empty losses");
  }
  RegretResult out;
  out.regret.resize(algorithm_losses.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < algorithm_losses.size(); ++i) {
    acc += algorithm_losses[i] - comparator_losses[i];
    out.regret[i] = acc;
  }

  const std::size_t n = out.regret.size();
  const std::size_t start = (n + 1) / 2;  // steps start+1 .. n (1-based)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = start; i < n; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(std::max(out.regret[i], 1.0));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    out.slope = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  }
  return out;
}

KrrComparator::KrrComparator(KernelParams kernel, Eigen::MatrixXd centers,
                             const Eigen::VectorXd& targets, double ridge)
    : kernel_(kernel), centers_(std::move(centers)) {
  const Eigen::Index s = centers_.cols();
  if (s < 1 || targets.size() != s) {
    throw std::invalid_argument("krr: centers/targets size mismatch");
  }
  if (!(ridge > 0.0)) {
    throw std::invalid_argument("krr: ridge must be > 0");
  }
  center_sq_norms_ = centers_.colwise().squaredNorm();
  Eigen::MatrixXd g =
      center_sq_norms_.replicate(1, s) +
      center_sq_norms_.transpose().replicate(s, 1) -
      2.0 * (centers_.transpose() * centers_);
  g = (-kernel_.bandwidth * g.cwiseMax(0.0)).array().exp();
  g.diagonal().array() += ridge;
  alpha_ = g.ldlt().solve(targets);
}

double KrrComparator::predict(const Regressor& input) const {
  return predict_batch(input)(0);
}

Eigen::VectorXd KrrComparator::predict_batch(
    const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != centers_.rows()) {
    throw std::invalid_argument("krr: query dimension mismatch");
  }
  const Eigen::Index q = inputs.cols();
  Eigen::MatrixXd sqdist =
      center_sq_norms_.replicate(1, q) +
      inputs.colwise().squaredNorm().replicate(centers_.cols(), 1) -
      2.0 * (centers_.transpose() * inputs);
  return ((-kernel_.bandwidth * sqdist.cwiseMax(0.0)).array().exp().matrix())
             .transpose() *
         alpha_;
}

}  // namespace dklms
