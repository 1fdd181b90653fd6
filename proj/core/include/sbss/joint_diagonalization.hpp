#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace sbss {

struct JointDiagonalizationOptions {
  double angle_tolerance = 1e-10;  // stop once every rotation in a sweep is smaller
  int max_sweeps = 100;
};

struct JointDiagonalization {
  /// Orthogonal U such that U M_k U^T is as diagonal as possible.
  Eigen::MatrixXd rotation;
  /// Off-diagonal mass sum_k ||offdiag(U M_k U^T)||^2; entry 0 is the
  /// input, then one entry per sweep.
  std::vector<double> off_diagonal_trace;
  int sweeps = 0;
  bool converged = false;
};

/// Sum over matrices of squared off-diagonal entries.
double off_diagonal_mass(std::span<const Eigen::MatrixXd> matrices);

/// Approximate joint diagonalization of symmetric matrices by Jacobi
/// rotations. Each rotation is the closed-form optimum for its index pair,
/// so the off-diagonal mass never increases. Throws Error(validation) for
/// an empty set, mismatched shapes or non-symmetric input; hitting the
/// sweep cap returns with converged == false.
JointDiagonalization joint_diagonalize(std::span<const Eigen::MatrixXd> matrices,
                                       const JointDiagonalizationOptions& options = {});

}  // namespace sbss
