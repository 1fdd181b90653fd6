#include "sbss/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sbss/error.hpp"

namespace sbss {

DistanceMatrix::DistanceMatrix(std::span<const Point> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  values_.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = distance(points[static_cast<std::size_t>(i)],
                                points[static_cast<std::size_t>(j)]);
      values_(i, j) = d;
      values_(j, i) = d;
    }
  }
}

double DistanceMatrix::max() const { return values_.size() ? values_.maxCoeff() : 0.0; }

DistanceMatrix pairwise_distances(const SpatialDataset& ds) {
  return DistanceMatrix(ds.locations());
}

namespace {

// Degenerate extents (all points on one line) get a unit-ish pad so cells
// still have area.
BoundingBox padded(BoundingBox box) {
  const double fallback = std::max({box.width(), box.height(), 1.0});
  if (box.width() <= kGeometryEpsilon) {
    box.min_x -= 0.5 * fallback;
    box.max_x += 0.5 * fallback;
  }
  if (box.height() <= kGeometryEpsilon) {
    box.min_y -= 0.5 * fallback;
    box.max_y += 0.5 * fallback;
  }
  return box;
}

}  // namespace

GridLayout::GridLayout(BoundingBox box, std::size_t n_side)
    : box_(padded(box)), n_side_(n_side) {
  if (n_side == 0) throw_validation("invalid_grid", "grid side must be at least 1");
  step_x_ = box_.width() / static_cast<double>(n_side_);
  step_y_ = box_.height() / static_cast<double>(n_side_);
}

std::size_t GridLayout::axis_index(double v, double lo, double step) const {
  const double t = (v - lo) / step - kGeometryEpsilon / step;
  const double c = std::ceil(t) - 1.0;
  if (c <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(c), n_side_ - 1);
}

std::size_t GridLayout::cell_of(Point p) const {
  const std::size_t col = axis_index(p.x, box_.min_x, step_x_);
  const std::size_t row = axis_index(p.y, box_.min_y, step_y_);
  return row * n_side_ + col;
}

Ring GridLayout::cell_ring(std::size_t cell) const {
  const std::size_t row = cell / n_side_;
  const std::size_t col = cell % n_side_;
  auto edge = [&](std::size_t k, double lo, double hi, double step) {
    return k == n_side_ ? hi : lo + static_cast<double>(k) * step;
  };
  const double x0 = edge(col, box_.min_x, box_.max_x, step_x_);
  const double x1 = edge(col + 1, box_.min_x, box_.max_x, step_x_);
  const double y0 = edge(row, box_.min_y, box_.max_y, step_y_);
  const double y1 = edge(row + 1, box_.min_y, box_.max_y, step_y_);
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

Point GridLayout::cell_center(std::size_t cell) const {
  const Ring r = cell_ring(cell);
  return {0.5 * (r[0].x + r[2].x), 0.5 * (r[0].y + r[2].y)};
}

Regionalization grid_partition(const SpatialDataset& ds, std::size_t n_side) {
  const GridLayout grid(bounding_box(ds.locations()), n_side);
  std::vector<std::size_t> counts(grid.cell_count(), 0);
  for (const Point& p : ds.locations()) ++counts[grid.cell_of(p)];

  Regionalization out;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    out.regions.emplace_back(static_cast<RegionId>(c), grid.cell_ring(c));
  }
  return out;
}

}  // namespace sbss
