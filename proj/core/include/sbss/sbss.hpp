#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sbss/covariance.hpp"
#include "sbss/joint_diagonalization.hpp"
#include "sbss/model.hpp"

namespace sbss {

/// Global whitening: Y = Cov^{-1/2} (x - mean).
struct Whitening {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd inverse_sqrt;  // symmetric Cov^{-1/2}
  Eigen::MatrixXd whitened;      // n x p, rows are whitened observations

  /// inverse_sqrt * M * inverse_sqrt, symmetrized.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;
};

inline constexpr double kMaxWhiteningCondition = 1e12;

/// Throws Error(numeric, "collinear_variables") if the covariance is
/// singular or its condition number exceeds kMaxWhiteningCondition.
Whitening whiten(const SpatialDataset& ds);

struct SbssOptions {
  LocalNormalization normalization = LocalNormalization::locations;
  JointDiagonalizationOptions diagonalization;
};

/// One whitened local covariance matrix entering the diagonalization.
struct LocalMatrixLabel {
  RegionId region = 0;
  std::size_t ring = 0;
};

struct SbssResult {
  Eigen::MatrixXd unmixing;          // W, p x p; row k loads component k
  Eigen::MatrixXd latent_scores;     // n x p, row i = W (x_i - mean)
  Eigen::MatrixXd pseudo_eigenvalues;  // p x m: diag(U M_k U^T) per component
  std::vector<LocalMatrixLabel> local_matrices;
  std::vector<double> off_diagonal_trace;
  int sweeps = 0;
  bool converged = false;
  /// Component order applied: output component k is diagonalizer row
  /// component_order[k].
  std::vector<std::size_t> component_order;
  std::vector<Point> locations;      // copied for export convenience
  std::vector<std::string> variable_names;
};

/// Estimates the unmixing matrix for a parameter setting.
///
/// Local covariances are computed per (region, ring) within each region,
/// whitened with the global covariance and jointly diagonalized. The global
/// covariance itself is not part of the set since it whitens to I.
/// Components are sorted by descending sum of squared pseudo eigenvalues
/// and each row of W is signed so its largest-magnitude loading is positive.
///
/// Errors: invalid setting (validation), "region_too_small" (validation),
/// "no_informative_local_covariance" and "collinear_variables" (numeric).
SbssResult run_sbss(const SpatialDataset& ds, const ParameterSetting& setting,
                    const SbssOptions& options = {});

/// Sum over eigenvalue pairs of squared differences of the whitened local
/// covariance.
double eigenvalue_difference(const CovMatrix& local, const Whitening& whitening);

}  // namespace sbss
