#include "sbss/covariance.hpp"

#include "sbss/error.hpp"

namespace sbss {

std::size_t NeighbourhoodMatrix::pair_count() const {
  return static_cast<std::size_t>(values_.cast<std::size_t>().sum());
}

NeighbourhoodMatrix neighbourhood_matrix(std::span<const Point> locations,
                                         const KernelRing& ring) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  NeighbourhoodMatrix::Storage k = NeighbourhoodMatrix::Storage::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = distance(locations[static_cast<std::size_t>(i)],
                                locations[static_cast<std::size_t>(j)]);
      if (ring.contains(d)) k(i, j) = k(j, i) = 1;
    }
  }
  return NeighbourhoodMatrix(std::move(k));
}

NeighbourhoodMatrix neighbourhood_matrix(const DistanceMatrix& distances,
                                         std::span<const std::size_t> members,
                                         const KernelRing& ring) {
  return neighbourhood_matrix(distances, members, KernelConfig{{ring}});
}

NeighbourhoodMatrix neighbourhood_matrix(const DistanceMatrix& distances,
                                         std::span<const std::size_t> members,
                                         const KernelConfig& kernel) {
  const auto n = static_cast<Eigen::Index>(members.size());
  NeighbourhoodMatrix::Storage k = NeighbourhoodMatrix::Storage::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = distances(members[static_cast<std::size_t>(i)],
                                 members[static_cast<std::size_t>(j)]);
      for (const KernelRing& ring : kernel.rings) {
        if (ring.contains(d)) {
          k(i, j) = k(j, i) = 1;
          break;
        }
      }
    }
  }
  return NeighbourhoodMatrix(std::move(k));
}

double mean_neighbourhood_size(const NeighbourhoodMatrix& k) {
  if (k.size() == 0) return 0.0;
  return static_cast<double>(k.pair_count()) / static_cast<double>(k.size());
}

Eigen::MatrixXd centered_rows(const Eigen::MatrixXd& values,
                              std::span<const std::size_t> members) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(members.size()), values.cols());
  for (std::size_t r = 0; r < members.size(); ++r) {
    rows.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(members[r]));
  }
  if (rows.rows() > 0) rows.rowwise() -= rows.colwise().mean();
  return rows;
}

CovMatrix global_covariance(const SpatialDataset& ds) {
  const Eigen::MatrixXd centered =
      ds.variables().rowwise() - ds.variables().colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(ds.size());
  return {0.5 * (cov + cov.transpose()), CovFlavor::global};
}

CovMatrix region_covariance(const SpatialDataset& ds, std::span<const std::size_t> members) {
  if (members.size() < 2) {
    throw_validation("region_too_small", "region too small for covariance");
  }
  const Eigen::MatrixXd centered = centered_rows(ds.variables(), members);
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(members.size());
  return {0.5 * (cov + cov.transpose()), CovFlavor::region};
}

CovMatrix local_covariance(const SpatialDataset& ds, std::span<const std::size_t> members,
                           const NeighbourhoodMatrix& k, LocalNormalization norm) {
  const auto p = static_cast<Eigen::Index>(ds.dimension());
  if (members.size() < 2) {
    throw_validation("region_too_small", "region too small for covariance");
  }
  if (k.size() != members.size()) {
    throw_validation("shape_mismatch", "neighbourhood matrix does not match region size");
  }
  const std::size_t pairs = k.pair_count();
  if (pairs == 0) return {Eigen::MatrixXd::Zero(p, p), CovFlavor::local};

  const Eigen::MatrixXd centered = centered_rows(ds.variables(), members);
  const Eigen::MatrixXd weights = k.values().cast<double>();
  Eigen::MatrixXd m = centered.transpose() * (weights * centered);
  const double divisor = norm == LocalNormalization::locations
                             ? static_cast<double>(members.size())
                             : static_cast<double>(pairs);
  m /= divisor;
  return {0.5 * (m + m.transpose()), CovFlavor::local};
}

CovMatrix local_covariance(const SpatialDataset& ds, std::span<const std::size_t> members,
                           const KernelRing& ring, LocalNormalization norm) {
  std::vector<Point> pts;
  pts.reserve(members.size());
  for (std::size_t m : members) pts.push_back(ds.locations()[m]);
  return local_covariance(ds, members, neighbourhood_matrix(pts, ring), norm);
}

}  // namespace sbss
