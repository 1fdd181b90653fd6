#include "sbss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sbss/covariance.hpp"
#include "sbss/error.hpp"

namespace sbss {

std::size_t minimum_count(double threshold, std::size_t total) {
  const double raw = threshold * static_cast<double>(total);
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(raw));
}

std::vector<RegionCount> region_location_counts(const Regionalization& r,
                                                const SpatialDataset& ds,
                                                double threshold) {
  const auto members = members_by_region(r, ds);
  const std::size_t floor_count = minimum_count(threshold, ds.size());
  std::vector<RegionCount> out;
  out.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    out.push_back({r.regions[k].id(), members[k].size(), members[k].size() < floor_count});
  }
  return out;
}

std::vector<KernelCount> kernel_location_counts(
    const Regionalization& r, const std::vector<std::vector<std::size_t>>& members,
    const KernelConfig& kernel, const DistanceMatrix& distances, double threshold) {
  std::vector<KernelCount> out;
  out.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    KernelCount entry;
    entry.id = r.regions[k].id();
    entry.region_size = members[k].size();
    const double floor_count =
        static_cast<double>(minimum_count(threshold, members[k].size()));
    for (const KernelRing& ring : kernel.rings) {
      const double mean = mean_neighbourhood_size(neighbourhood_matrix(distances, members[k], ring));
      entry.ring_means.push_back(mean);
      entry.ring_flagged.push_back(mean < floor_count);
    }
    entry.config_mean =
        mean_neighbourhood_size(neighbourhood_matrix(distances, members[k], kernel));
    entry.config_flagged = entry.config_mean < floor_count;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<KernelCount> kernel_location_counts(const Regionalization& r,
                                                const KernelConfig& kernel,
                                                const SpatialDataset& ds, double threshold) {
  return kernel_location_counts(r, members_by_region(r, ds), kernel, pairwise_distances(ds),
                                threshold);
}

std::vector<std::optional<double>> region_cov_difference(
    const std::vector<std::vector<std::size_t>>& members, const SpatialDataset& ds) {
  const Eigen::MatrixXd global = global_covariance(ds).values;
  std::vector<std::optional<double>> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    if (m.size() < 2) {
      out.emplace_back();
    } else {
      out.emplace_back((global - region_covariance(ds, m).values).norm());
    }
  }
  return out;
}

std::vector<std::optional<double>> region_cov_difference(const Regionalization& r,
                                                         const SpatialDataset& ds) {
  return region_cov_difference(members_by_region(r, ds), ds);
}

std::vector<std::vector<std::optional<double>>> region_eigenvalue_differences(
    const Regionalization& r, const KernelConfig& kernel, const SpatialDataset& ds) {
  const auto members = members_by_region(r, ds);
  const Whitening white = whiten(ds);
  const DistanceMatrix distances = pairwise_distances(ds);
  std::vector<std::vector<std::optional<double>>> out(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (const KernelRing& ring : kernel.rings) {
      if (members[k].size() < 2) {
        out[k].emplace_back();
        continue;
      }
      const CovMatrix local =
          local_covariance(ds, members[k], neighbourhood_matrix(distances, members[k], ring));
      out[k].emplace_back(eigenvalue_difference(local, white));
    }
  }
  return out;
}

std::vector<KernelRing> kernel_suggestions(double max_radius, std::size_t depth) {
  if (!(max_radius > 0.0) || !std::isfinite(max_radius)) {
    throw_validation("invalid_params", "max_radius must be positive", "max_radius");
  }
  if (depth > 16) throw_validation("invalid_params", "kernel depth too large", "kernel_depth");
  std::vector<KernelRing> out;
  for (std::size_t level = 0; level <= depth; ++level) {
    const double parts = std::ldexp(1.0, static_cast<int>(level));
    const auto count = static_cast<std::size_t>(parts);
    for (std::size_t k = 0; k < count; ++k) {
      const double inner = k == 0 ? 0.0 : max_radius * static_cast<double>(k) / parts;
      const double outer =
          k + 1 == count ? max_radius : max_radius * static_cast<double>(k + 1) / parts;
      out.push_back({inner, outer});
    }
  }
  return out;
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw_validation("empty_sample", "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double default_max_radius(const DistanceMatrix& distances) {
  std::vector<double> all;
  const std::size_t n = distances.size();
  all.reserve(n * (n - 1) / 2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) all.push_back(distances(i, j));
  }
  std::sort(all.begin(), all.end());
  return sorted_quantile(all, 0.25);
}

DistanceHistogram distance_density(const DistanceMatrix& distances, std::size_t bins) {
  if (bins == 0) throw_validation("invalid_params", "bins must be positive", "bins");
  const std::size_t n = distances.size();
  const double max_d = distances.max();
  DistanceHistogram out;
  out.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) {
    out.edges.push_back(max_d * static_cast<double>(b) / static_cast<double>(bins));
  }
  const double width = max_d / static_cast<double>(bins);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      const double d = distances(i, j);
      std::size_t b = width > 0.0 ? static_cast<std::size_t>(d / width) : 0;
      ++out.counts[std::min(b, bins - 1)];
    }
  }
  return out;
}

DistanceHistogram distance_density(const SpatialDataset& ds, std::size_t bins) {
  return distance_density(pairwise_distances(ds), bins);
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return sorted_quantile(v, 0.5);
}

}  // namespace

std::vector<double> sextile_boundaries(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (int k = 1; k <= 5; ++k) out.push_back(sorted_quantile(values, k / 6.0));
  return out;
}

int sextile_index(double value, const std::vector<double>& boundaries) {
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    if (boundaries[k] >= value) return static_cast<int>(k) + 1;
  }
  return static_cast<int>(boundaries.size()) + 1;
}

std::vector<GridSummaryCell> variable_grid_summary(const SpatialDataset& ds,
                                                   std::size_t variable,
                                                   std::size_t grid_side) {
  if (variable >= ds.dimension()) {
    throw_validation("unknown_variable", "variable index out of range", "variable");
  }
  if (grid_side == 0) throw_validation("invalid_params", "grid side must be positive", "grid_side");
  const GridLayout grid(bounding_box(ds.locations()), grid_side);
  const auto column = ds.variables().col(static_cast<Eigen::Index>(variable));
  std::vector<double> values(column.data(), column.data() + column.size());
  const auto boundaries = sextile_boundaries(values);

  std::map<std::size_t, std::vector<double>> cells;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    cells[grid.cell_of(ds.locations()[i])].push_back(values[i]);
  }
  std::vector<GridSummaryCell> out;
  for (auto& [cell, members] : cells) {
    GridSummaryCell c;
    c.cell = cell;
    c.center = grid.cell_center(cell);
    c.count = members.size();
    c.median = median_of(std::move(members));
    c.sextile = sextile_index(c.median, boundaries);
    out.push_back(c);
  }
  return out;
}

SettingMetrics setting_metrics(const SpatialDataset& ds, const ParameterSetting& setting,
                               double threshold, bool include_experimental) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw_validation("invalid_params", "threshold must lie in (0, 1)", "threshold");
  }
  const ValidityReport kernel = validate_kernel(setting.kernel);
  if (!kernel.ok()) throw_validation("invalid_kernel", kernel.violations.front(), "/kernel");
  const auto& r = setting.regionalization;
  const auto members = members_by_region(r, ds);
  const DistanceMatrix distances = pairwise_distances(ds);

  SettingMetrics out;
  const std::size_t floor_count = minimum_count(threshold, ds.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    out.regions.push_back({r.regions[k].id(), members[k].size(), members[k].size() < floor_count});
  }
  out.cov_diff = region_cov_difference(members, ds);
  out.kernels = kernel_location_counts(r, members, setting.kernel, distances, threshold);
  if (include_experimental) {
    out.eigenvalue_difference = region_eigenvalue_differences(r, setting.kernel, ds);
  }
  return out;
}

}  // namespace sbss
