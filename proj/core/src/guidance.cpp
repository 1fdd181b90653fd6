#include "sbss/guidance.hpp"

#include <cmath>

#include "sbss/error.hpp"
#include "sbss/parallel.hpp"
#include "sbss/voronoi.hpp"

namespace sbss {

void validate(const GuidanceParams& params, std::size_t location_count) {
  if (!(params.threshold > 0.0 && params.threshold < 1.0)) {
    throw_validation("invalid_params", "threshold must lie in (0, 1)", "threshold");
  }
  if (params.grid_max < 1) {
    throw_validation("invalid_params", "grid max must be at least 1", "grid_max");
  }
  if (params.k_min < 1 || params.k_min > params.k_max || params.k_max > location_count) {
    throw_validation("invalid_params", "k range invalid", "k_max");
  }
  if (params.kernel_depth > 8) {
    throw_validation("invalid_params", "kernel depth must be at most 8", "kernel_depth");
  }
  if (params.max_radius && !(*params.max_radius > 0.0 && std::isfinite(*params.max_radius))) {
    throw_validation("invalid_params", "max radius must be positive", "max_radius");
  }
  if (params.variogram_bins < 1) {
    throw_validation("invalid_params", "variogram bins must be positive", "variogram_bins");
  }
  if (params.max_lag && !(*params.max_lag > 0.0 && std::isfinite(*params.max_lag))) {
    throw_validation("invalid_params", "max lag must be positive", "max_lag");
  }
}

GuidanceBundle compute_guidance(const SpatialDataset& ds, const GuidanceParams& params) {
  validate(params, ds.size());
  const DistanceMatrix distances = pairwise_distances(ds);

  GuidanceBundle bundle;
  bundle.params = params;
  if (!bundle.params.max_radius) bundle.params.max_radius = default_max_radius(distances);
  if (!bundle.params.max_lag) bundle.params.max_lag = 0.5 * distances.max();

  for (std::size_t side = 1; side <= params.grid_max; ++side) {
    bundle.regionalizations.push_back({"grid", side, grid_partition(ds, side), {}});
  }
  {
    const VoronoiDiagram voronoi(ds.locations());
    const RegionTree tree(ds, voronoi, params.k_max);
    for (std::size_t k = params.k_min; k <= params.k_max; ++k) {
      bundle.regionalizations.push_back({"covariance", k, tree.regionalization(k), {}});
    }
  }

  const auto rings = kernel_suggestions(*bundle.params.max_radius, params.kernel_depth);
  const std::size_t count = bundle.regionalizations.size();
  std::vector<std::vector<std::vector<double>>> means(count);
  std::vector<std::vector<std::vector<bool>>> flags(count);

  parallel_for(count, [&](std::size_t s) {
    auto& suggestion = bundle.regionalizations[s];
    const auto& r = suggestion.regionalization;
    const auto members = members_by_region(r, ds);
    const std::size_t floor_count = minimum_count(params.threshold, ds.size());
    const auto cov_diff = region_cov_difference(members, ds);
    for (std::size_t k = 0; k < members.size(); ++k) {
      suggestion.metrics.push_back(
          {r.regions[k].id(), members[k].size(), members[k].size() < floor_count, cov_diff[k]});
    }
    const auto kernel_counts =
        kernel_location_counts(r, members, KernelConfig{rings}, distances, params.threshold);
    means[s].assign(rings.size(), {});
    flags[s].assign(rings.size(), {});
    for (const KernelCount& kc : kernel_counts) {
      for (std::size_t ring = 0; ring < rings.size(); ++ring) {
        means[s][ring].push_back(kc.ring_means[ring]);
        flags[s][ring].push_back(kc.ring_flagged[ring]);
      }
    }
  });

  for (std::size_t ring = 0; ring < rings.size(); ++ring) {
    KernelSuggestion ks;
    ks.ring = rings[ring];
    for (std::size_t s = 0; s < count; ++s) {
      ks.mean_counts.push_back(means[s][ring]);
      ks.flagged.push_back(flags[s][ring]);
    }
    bundle.kernel_suggestions.push_back(std::move(ks));
  }

  bundle.variograms = variograms(ds, distances, params.variogram_bins, *bundle.params.max_lag);
  return bundle;
}

}  // namespace sbss
