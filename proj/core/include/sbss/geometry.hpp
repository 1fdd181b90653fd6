#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sbss/model.hpp"

namespace sbss {

/// Symmetric n x n Euclidean distances with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::span<const Point> points);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& values() const { return values_; }
  double max() const;

 private:
  Eigen::MatrixXd values_;
};

DistanceMatrix pairwise_distances(const SpatialDataset& ds);

/// Equal n_side x n_side cells over a bounding box. Cells are numbered
/// row-major from the lower-left corner. A point on an interior grid line
/// belongs to the lower-numbered neighbour, matching the smallest-id tie
/// rule that assign_locations applies to the resulting polygons.
class GridLayout {
 public:
  GridLayout(BoundingBox box, std::size_t n_side);

  std::size_t n_side() const { return n_side_; }
  std::size_t cell_count() const { return n_side_ * n_side_; }
  std::size_t cell_of(Point p) const;
  Ring cell_ring(std::size_t cell) const;
  Point cell_center(std::size_t cell) const;

 private:
  std::size_t axis_index(double v, double lo, double step) const;

  BoundingBox box_;
  std::size_t n_side_;
  double step_x_;
  double step_y_;
};

/// Grid regionalization over the dataset's bounding box. Empty cells are
/// dropped; surviving regions keep their cell number as id.
Regionalization grid_partition(const SpatialDataset& ds, std::size_t n_side);

}  // namespace sbss
