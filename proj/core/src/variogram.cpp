#include "sbss/variogram.hpp"

#include <cmath>

#include "sbss/error.hpp"
#include "sbss/redcap.hpp"

namespace sbss {

VariogramSet variograms(const SpatialDataset& ds, const DistanceMatrix& distances,
                        std::size_t bins, double max_lag, const VariogramOptions& options) {
  if (bins == 0) throw_validation("invalid_params", "bins must be positive", "bins");
  if (!(max_lag > 0.0) || !std::isfinite(max_lag)) {
    throw_validation("invalid_params", "max_lag must be positive", "max_lag");
  }
  const Eigen::MatrixXd values =
      options.standardize ? standardized(ds.variables()) : ds.variables();
  const std::size_t n = ds.size();
  const auto p = static_cast<std::size_t>(values.cols());
  const double width = max_lag / static_cast<double>(bins);

  VariogramSet out;
  for (std::size_t b = 0; b <= bins; ++b) {
    out.edges.push_back(b == bins ? max_lag : width * static_cast<double>(b));
  }
  out.pair_counts.assign(bins, 0);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                               static_cast<Eigen::Index>(bins));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      const double d = distances(i, j);
      if (d > max_lag) continue;
      const std::size_t b = std::min(static_cast<std::size_t>(d / width), bins - 1);
      ++out.pair_counts[b];
      const auto diff = (values.row(static_cast<Eigen::Index>(i)) -
                         values.row(static_cast<Eigen::Index>(j)))
                            .array()
                            .square();
      sums.col(static_cast<Eigen::Index>(b)) += diff.matrix().transpose();
    }
  }

  const double factor = options.semivariance ? 0.5 : 1.0;
  out.per_variable.assign(p, std::vector<std::optional<double>>(bins));
  out.dispersion.assign(bins, std::nullopt);
  for (std::size_t b = 0; b < bins; ++b) {
    if (out.pair_counts[b] == 0) continue;
    double mean = 0.0;
    for (std::size_t v = 0; v < p; ++v) {
      const double gamma = factor *
                           sums(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(b)) /
                           static_cast<double>(out.pair_counts[b]);
      out.per_variable[v][b] = gamma;
      mean += gamma;
    }
    mean /= static_cast<double>(p);
    double var = 0.0;
    for (std::size_t v = 0; v < p; ++v) {
      const double d = *out.per_variable[v][b] - mean;
      var += d * d;
    }
    out.dispersion[b] = var / static_cast<double>(p);
  }
  return out;
}

VariogramSet variograms(const SpatialDataset& ds, std::size_t bins, double max_lag,
                        const VariogramOptions& options) {
  return variograms(ds, pairwise_distances(ds), bins, max_lag, options);
}

}  // namespace sbss
