#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sbss/metrics.hpp"
#include "sbss/model.hpp"
#include "sbss/redcap.hpp"
#include "sbss/variogram.hpp"

namespace sbss {

struct GuidanceParams {
  std::size_t grid_max = 6;            // grids n_side = 1..grid_max
  std::size_t k_min = 2;               // covariance regionalizations k_min..k_max
  std::size_t k_max = 8;
  std::size_t kernel_depth = 2;
  std::optional<double> max_radius;    // default: 25th distance percentile
  double threshold = kDefaultThreshold;
  std::size_t variogram_bins = 15;
  std::optional<double> max_lag;       // default: half the largest distance

  friend bool operator==(const GuidanceParams&, const GuidanceParams&) = default;
};

/// Throws Error(validation, "invalid_params") with the offending field.
void validate(const GuidanceParams& params, std::size_t location_count);

struct RegionMetrics {
  RegionId id = 0;
  std::size_t count = 0;
  bool flagged = false;
  std::optional<double> cov_diff;
};

struct SuggestedRegionalization {
  std::string source;      // "grid" or "covariance"
  std::size_t parameter = 0;  // n_side for grids, k for covariance
  Regionalization regionalization;
  std::vector<RegionMetrics> metrics;
};

struct KernelSuggestion {
  KernelRing ring;
  /// [regionalization][region] mean neighbourhood size, aligned with
  /// GuidanceBundle::regionalizations.
  std::vector<std::vector<double>> mean_counts;
  std::vector<std::vector<bool>> flagged;
};

struct GuidanceBundle {
  GuidanceParams params;  // defaults resolved
  std::vector<SuggestedRegionalization> regionalizations;
  std::vector<KernelSuggestion> kernel_suggestions;
  VariogramSet variograms;
};

/// Precomputes grid and covariance regionalizations, single-ring kernel
/// suggestions and variograms, each annotated with its metrics.
GuidanceBundle compute_guidance(const SpatialDataset& ds, const GuidanceParams& params = {});

}  // namespace sbss
