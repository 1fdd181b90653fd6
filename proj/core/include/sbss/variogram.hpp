#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbss/geometry.hpp"
#include "sbss/model.hpp"

namespace sbss {

struct VariogramOptions {
  /// Halve the mean squared difference (classical semivariogram). Off gives
  /// the plain average squared difference.
  bool semivariance = true;
  /// Standardize each variable first so the curves compare shapes.
  bool standardize = true;
};

struct VariogramSet {
  std::vector<double> edges;                                // bins + 1, from 0 to max_lag
  std::vector<std::size_t> pair_counts;                     // per bin
  std::vector<std::vector<std::optional<double>>> per_variable;  // [variable][bin]
  std::vector<std::optional<double>> dispersion;            // variance across variables
};

/// Empirical variograms on equal-width lag bins over [0, max_lag]. Pairs
/// farther apart than max_lag are ignored; empty bins stay absent.
VariogramSet variograms(const SpatialDataset& ds, std::size_t bins, double max_lag,
                        const VariogramOptions& options = {});

VariogramSet variograms(const SpatialDataset& ds, const DistanceMatrix& distances,
                        std::size_t bins, double max_lag,
                        const VariogramOptions& options = {});

}  // namespace sbss
