#include "sbss/sbss.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sbss/error.hpp"

namespace sbss {

Eigen::MatrixXd Whitening::apply(const Eigen::MatrixXd& m) const {
  const Eigen::MatrixXd w = inverse_sqrt * m * inverse_sqrt;
  return 0.5 * (w + w.transpose());
}

Whitening whiten(const SpatialDataset& ds) {
  Whitening out;
  out.mean = ds.variables().colwise().mean().transpose();
  out.covariance = global_covariance(ds).values;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.covariance);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double smallest = lambda.minCoeff();
  const double largest = lambda.maxCoeff();
  if (!(smallest > 0.0) || largest / smallest > kMaxWhiteningCondition) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "collinear variables; whitening unstable (smallest covariance eigenvalue "
        << smallest << ")";
    throw_numeric("collinear_variables", msg.str());
  }
  out.inverse_sqrt = eig.eigenvectors() * lambda.cwiseInverse().cwiseSqrt().asDiagonal() *
                     eig.eigenvectors().transpose();
  out.inverse_sqrt = 0.5 * (out.inverse_sqrt + out.inverse_sqrt.transpose()).eval();
  out.whitened = (ds.variables().rowwise() - out.mean.transpose()) * out.inverse_sqrt;
  return out;
}

SbssResult run_sbss(const SpatialDataset& ds, const ParameterSetting& setting,
                    const SbssOptions& options) {
  const ValidityReport kernel_report = validate_kernel(setting.kernel);
  if (!kernel_report.ok()) throw_validation("invalid_kernel", kernel_report.violations.front());
  const auto members = members_by_region(setting.regionalization, ds);

  const Whitening white = whiten(ds);
  const DistanceMatrix distances = pairwise_distances(ds);

  SbssResult result;
  std::vector<Eigen::MatrixXd> whitened_locals;
  bool informative = false;
  for (std::size_t r = 0; r < members.size(); ++r) {
    const RegionId id = setting.regionalization.regions[r].id();
    if (members[r].size() < 2) {
      throw_validation("region_too_small",
                       "region " + std::to_string(id) + " too small for covariance");
    }
    for (std::size_t ring = 0; ring < setting.kernel.rings.size(); ++ring) {
      const NeighbourhoodMatrix k =
          neighbourhood_matrix(distances, members[r], setting.kernel.rings[ring]);
      const CovMatrix local = local_covariance(ds, members[r], k, options.normalization);
      if (local.values.cwiseAbs().maxCoeff() > 0.0) informative = true;
      whitened_locals.push_back(white.apply(local.values));
      result.local_matrices.push_back({id, ring});
    }
  }
  if (!informative) {
    throw_numeric("no_informative_local_covariance", "no informative local covariance");
  }

  const JointDiagonalization jd = joint_diagonalize(whitened_locals, options.diagonalization);
  const auto p = static_cast<Eigen::Index>(ds.dimension());
  const auto m = static_cast<Eigen::Index>(whitened_locals.size());

  Eigen::MatrixXd pseudo(p, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    pseudo.col(k) =
        (jd.rotation * whitened_locals[static_cast<std::size_t>(k)] * jd.rotation.transpose())
            .diagonal();
  }
  const Eigen::VectorXd strength = pseudo.rowwise().squaredNorm();
  std::vector<std::size_t> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return strength(static_cast<Eigen::Index>(a)) > strength(static_cast<Eigen::Index>(b));
  });

  const Eigen::MatrixXd raw_w = jd.rotation * white.inverse_sqrt;
  result.unmixing.resize(p, p);
  result.pseudo_eigenvalues.resize(p, m);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]);
    Eigen::RowVectorXd row = raw_w.row(src);
    Eigen::Index arg = 0;
    row.cwiseAbs().maxCoeff(&arg);
    if (row(arg) < 0.0) row = -row;
    result.unmixing.row(k) = row;
    result.pseudo_eigenvalues.row(k) = pseudo.row(src);
  }

  result.latent_scores =
      (ds.variables().rowwise() - white.mean.transpose()) * result.unmixing.transpose();
  result.off_diagonal_trace = jd.off_diagonal_trace;
  result.sweeps = jd.sweeps;
  result.converged = jd.converged;
  result.component_order = std::move(order);
  result.locations.assign(ds.locations().begin(), ds.locations().end());
  result.variable_names = ds.variable_names();
  return result;
}

double eigenvalue_difference(const CovMatrix& local, const Whitening& whitening) {
  const Eigen::MatrixXd w = whitening.apply(local.values);
  const Eigen::VectorXd lambda =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues();
  double total = 0.0;
  for (Eigen::Index a = 0; a < lambda.size(); ++a) {
    for (Eigen::Index b = a + 1; b < lambda.size(); ++b) {
      const double d = lambda(a) - lambda(b);
      total += d * d;
    }
  }
  return total;
}

}  // namespace sbss
