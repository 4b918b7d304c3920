#pragma once

#include <Eigen/Core>
#include <vector>

namespace dklms {

// A regressor is a finite real vector; dimension is fixed per stream.
using Regressor = Eigen::VectorXd;

struct KernelParams {
  enum class Family { kGaussian };

  Family family = Family::kGaussian;
  double bandwidth = 1.0;  // beta in exp(-beta * ||u - v||^2), > 0

  static KernelParams gaussian(double bandwidth);
};

// exp(-beta * ||u - v||^2); result in (0, 1], 1 iff u == v.
// Throws std::invalid_argument on dimension mismatch.
double kernel_eval(const KernelParams& params, const Regressor& u,
                   const Regressor& v);

// G[i][j] = kernel_eval(points[i], points[j]); symmetric, unit diagonal,
// positive semidefinite. Throws on an empty list or mixed dimensions.
Eigen::MatrixXd gram_matrix(const KernelParams& params,
                            const std::vector<Regressor>& points);

}  // namespace dklms
