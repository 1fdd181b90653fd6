#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sbss/model.hpp"
#include "sbss/voronoi.hpp"

namespace sbss {

/// Frobenius distance between the outer products of rows i and j:
/// ||x_i x_i^T - x_j x_j^T||_F.
double edge_distance(const Eigen::MatrixXd& values, std::size_t i, std::size_t j);

/// Sum over members of ||(x_i - m)(x_i - m)^T - Cov_r||_F with the region
/// mean m and covariance Cov_r (divisor n_r). A single member gives 0.
double region_heterogeneity(const Eigen::MatrixXd& values,
                            std::span<const std::size_t> members);

/// Columns scaled to zero mean and unit variance (divisor n); constant
/// columns become zero.
Eigen::MatrixXd standardized(const Eigen::MatrixXd& values);

enum class Linkage {
  full_order_average,  // average edge distance over all member pairs
  first_order_single,  // shortest contiguity edge
};

struct RedcapOptions {
  Linkage linkage = Linkage::full_order_average;
  bool standardize = true;
  /// Skip cuts whose parts would enclose another region; regions are
  /// polygons without holes.
  bool avoid_holes = true;
};

struct TreeEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

/// Contiguity-constrained spanning tree plus the greedy cut sequence.
///
/// The tree comes from agglomerative clustering over the Voronoi adjacency:
/// the adjacent cluster pair with the smallest linkage merges and the
/// shortest contiguity edge between them joins the tree. Cuts are then
/// removed one at a time, each maximizing the drop in total heterogeneity.
/// The sequence for k_max regions contains every smaller k as a prefix.
class RegionTree {
 public:
  /// Throws Error(validation) when k_max is 0 or exceeds the location
  /// count, and Error(numeric, "regionalization_failed") if no admissible
  /// cut remains.
  RegionTree(const SpatialDataset& ds, const VoronoiDiagram& voronoi, std::size_t k_max,
             const RedcapOptions& options = {});

  const std::vector<TreeEdge>& edges() const { return edges_; }
  /// Indices into edges(), in cut order.
  const std::vector<std::size_t>& cuts() const { return cuts_; }
  /// Total heterogeneity after 0, 1, ... cuts.
  const std::vector<double>& heterogeneity() const { return heterogeneity_; }
  std::size_t max_regions() const { return cuts_.size() + 1; }

  /// Component label per location after k - 1 cuts. Labels are 0..k-1,
  /// numbered by each component's smallest location index.
  std::vector<std::size_t> labels(std::size_t k) const;

  /// Regions formed by dissolving the Voronoi cells of each component.
  Regionalization regionalization(std::size_t k) const;

 private:
  void build_tree(const Eigen::MatrixXd& values, Linkage linkage);
  void cut_greedily(const Eigen::MatrixXd& values, std::size_t k_max, bool avoid_holes);

  VoronoiDiagram voronoi_;
  std::size_t n_;
  std::vector<TreeEdge> edges_;
  std::vector<std::size_t> cuts_;
  std::vector<double> heterogeneity_;
};

/// Covariance-based regionalization into k connected regions.
Regionalization covariance_regionalization(const SpatialDataset& ds, std::size_t k,
                                           const RedcapOptions& options = {});

}  // namespace sbss
