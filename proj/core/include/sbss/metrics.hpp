#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbss/geometry.hpp"
#include "sbss/model.hpp"
#include "sbss/sbss.hpp"

namespace sbss {

inline constexpr double kDefaultThreshold = 0.05;

/// Smallest count that is not flagged: ceil(threshold * total). Products
/// within 1e-9 of an integer are treated as that integer.
std::size_t minimum_count(double threshold, std::size_t total);

struct RegionCount {
  RegionId id = 0;
  std::size_t count = 0;
  bool flagged = false;
};

/// Locations per region; flagged when below minimum_count(threshold, n).
std::vector<RegionCount> region_location_counts(const Regionalization& r,
                                                const SpatialDataset& ds,
                                                double threshold = kDefaultThreshold);

struct KernelCount {
  RegionId id = 0;
  std::size_t region_size = 0;
  std::vector<double> ring_means;   // mean neighbourhood size per ring
  std::vector<bool> ring_flagged;
  double config_mean = 0.0;         // union of all rings
  bool config_flagged = false;
};

/// Mean neighbourhood size per (region, ring), flagged when below
/// minimum_count(threshold, n_r).
std::vector<KernelCount> kernel_location_counts(const Regionalization& r,
                                                const KernelConfig& kernel,
                                                const SpatialDataset& ds,
                                                double threshold = kDefaultThreshold);

/// Same, reusing precomputed distances and region membership.
std::vector<KernelCount> kernel_location_counts(
    const Regionalization& r, const std::vector<std::vector<std::size_t>>& members,
    const KernelConfig& kernel, const DistanceMatrix& distances,
    double threshold = kDefaultThreshold);

/// ||Cov - Cov_r||_F per region; absent for regions with fewer than two
/// locations.
std::vector<std::optional<double>> region_cov_difference(const Regionalization& r,
                                                         const SpatialDataset& ds);

std::vector<std::optional<double>> region_cov_difference(
    const std::vector<std::vector<std::size_t>>& members, const SpatialDataset& ds);

/// Eigenvalue difference of the whitened local covariance per (region,
/// ring); absent where the region has fewer than two locations.
std::vector<std::vector<std::optional<double>>> region_eigenvalue_differences(
    const Regionalization& r, const KernelConfig& kernel, const SpatialDataset& ds);

/// Single-ring suggestions from recursive halving of (0, max_radius]:
/// level 0 is the full ring, level d halves every ring of level d - 1.
/// All levels up to `depth` are returned, coarse levels first.
std::vector<KernelRing> kernel_suggestions(double max_radius, std::size_t depth);

/// Type-7 (linear interpolation) quantile of an ascending sample.
double sorted_quantile(const std::vector<double>& sorted, double q);

/// 25th percentile of all pairwise distances.
double default_max_radius(const DistanceMatrix& distances);

struct DistanceHistogram {
  std::vector<double> edges;  // bins + 1 ascending edges from 0 to the max
  std::vector<std::size_t> counts;
};

/// Histogram of all n(n-1)/2 distances with equal-width bins on
/// [0, max distance]; the maximum falls in the last bin.
DistanceHistogram distance_density(const SpatialDataset& ds, std::size_t bins);
DistanceHistogram distance_density(const DistanceMatrix& distances, std::size_t bins);

struct GridSummaryCell {
  std::size_t cell = 0;
  Point center;
  double median = 0.0;
  int sextile = 1;  // 1..6; 1-3 below, 4-6 above the median
  std::size_t count = 0;
};

/// Global sextile boundaries (quantiles 1/6 .. 5/6) of a sample.
std::vector<double> sextile_boundaries(std::vector<double> values);

/// Smallest sextile whose upper boundary is >= value.
int sextile_index(double value, const std::vector<double>& boundaries);

/// Per non-empty grid cell: median of the variable and its sextile.
std::vector<GridSummaryCell> variable_grid_summary(const SpatialDataset& ds,
                                                   std::size_t variable,
                                                   std::size_t grid_side);

/// Everything the metric panel shows for one parameter setting.
struct SettingMetrics {
  std::vector<RegionCount> regions;
  std::vector<std::optional<double>> cov_diff;
  std::vector<KernelCount> kernels;
  /// [region][ring]; only filled when experimental metrics are requested.
  std::optional<std::vector<std::vector<std::optional<double>>>> eigenvalue_difference;
};

SettingMetrics setting_metrics(const SpatialDataset& ds, const ParameterSetting& setting,
                               double threshold = kDefaultThreshold,
                               bool include_experimental = false);

}  // namespace sbss
