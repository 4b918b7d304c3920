#include "dklms/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace dklms {

KernelParams KernelParams::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("kernel bandwidth must be > 0");
  }
  return KernelParams{Family::kGaussian, bandwidth};
}

double kernel_eval(const KernelParams& params, const Regressor& u,
                   const Regressor& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("kernel_eval: regressor dimensions differ");
  }
  return std::exp(-params.bandwidth * (u - v).squaredNorm());
}

Eigen::MatrixXd gram_matrix(const KernelParams& params,
                            const std::vector<Regressor>& points) {
  if (points.empty()) {
    throw std::invalid_argument("gram_matrix: empty point list");
  }
  const Eigen::Index dim = points.front().size();
  for (const Regressor& p : points) {
    if (p.size() != dim) {
      throw std::invalid_argument("gram_matrix: mixed regressor dimensions");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = kernel_eval(params, points[i], points[j]);
      g(i, j) = k;
      g(j, i) = k;  // exact symmetry by construction
    }
  }
  return g;
}

}  // namespace dklms
