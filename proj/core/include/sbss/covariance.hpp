#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sbss/geometry.hpp"
#include "sbss/model.hpp"

namespace sbss {

/// Symmetric 0/1 matrix over the locations of one region: entry (i, j) is 1
/// iff i != j and the pair's distance lies in the ring. Self pairs are
/// always excluded, also for rings with inner radius 0.
class NeighbourhoodMatrix {
 public:
  using Storage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  explicit NeighbourhoodMatrix(Storage values) : values_(std::move(values)) {}

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  bool operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0;
  }
  const Storage& values() const { return values_; }
  std::size_t pair_count() const;  // number of ordered pairs marked 1

 private:
  Storage values_;
};

NeighbourhoodMatrix neighbourhood_matrix(std::span<const Point> locations,
                                         const KernelRing& ring);

/// Same matrix, reading distances for `members` out of a precomputed table.
NeighbourhoodMatrix neighbourhood_matrix(const DistanceMatrix& distances,
                                         std::span<const std::size_t> members,
                                         const KernelRing& ring);

/// Union over all rings of a kernel configuration.
NeighbourhoodMatrix neighbourhood_matrix(const DistanceMatrix& distances,
                                         std::span<const std::size_t> members,
                                         const KernelConfig& kernel);

/// Mean column sum: the average neighbourhood size.
double mean_neighbourhood_size(const NeighbourhoodMatrix& k);

enum class CovFlavor { global, region, local };

struct CovMatrix {
  Eigen::MatrixXd values;
  CovFlavor flavor = CovFlavor::global;
};

/// Sample covariance with divisor n.
CovMatrix global_covariance(const SpatialDataset& ds);

/// Covariance of the member rows (divisor n_r). Throws
/// Error(validation, "region_too_small") for fewer than 2 members.
CovMatrix region_covariance(const SpatialDataset& ds, std::span<const std::size_t> members);

/// How local covariance matrices are normalized.
enum class LocalNormalization {
  locations,  // divide by the region's location count
  pairs,      // divide by the number of ordered pairs in the kernel
};

/// Kernel-weighted cross covariance of the region's centered values,
///   symmetrize( (1/n_r) sum_{i != j} K_ij (x_i - m)(x_j - m)^T ),
/// with pairs restricted to the region. A kernel that captures no pair
/// gives the zero matrix.
CovMatrix local_covariance(const SpatialDataset& ds, std::span<const std::size_t> members,
                           const NeighbourhoodMatrix& k,
                           LocalNormalization norm = LocalNormalization::locations);

CovMatrix local_covariance(const SpatialDataset& ds, std::span<const std::size_t> members,
                           const KernelRing& ring,
                           LocalNormalization norm = LocalNormalization::locations);

/// Rows of `values` selected by `members`, centered on their own mean.
Eigen::MatrixXd centered_rows(const Eigen::MatrixXd& values,
                              std::span<const std::size_t> members);

}  // namespace sbss
