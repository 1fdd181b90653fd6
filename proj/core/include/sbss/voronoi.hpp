#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sbss/model.hpp"

namespace sbss {

/// Undirected graph over location indices; neighbour lists are sorted.
struct AdjacencyGraph {
  std::vector<std::vector<std::size_t>> neighbours;

  std::size_t size() const { return neighbours.size(); }
  std::size_t edge_count() const;
  bool has_edge(std::size_t i, std::size_t j) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  /// Connectivity of the subgraph induced by `members` (all nodes if empty).
  bool connected(std::span<const std::size_t> members = {}) const;
};

inline constexpr std::size_t kFrameSite = static_cast<std::size_t>(-1);

/// Convex Voronoi cell clipped to the frame. Edge k runs from ring[k] to
/// ring[k + 1] and separates this site from edge_sites[k] (or the frame).
struct VoronoiCell {
  Ring ring;
  std::vector<std::size_t> edge_sites;
};

/// Voronoi diagram of a point set clipped to its bounding box expanded by
/// 5% per side. Cells are built by half-plane clipping in order of
/// increasing neighbour distance, which stops once no farther site can cut
/// the cell.
class VoronoiDiagram {
 public:
  /// Throws Error(validation, "degenerate_voronoi") for fewer than three or
  /// collinear sites.
  explicit VoronoiDiagram(std::span<const Point> sites);

  const BoundingBox& frame() const { return frame_; }
  const std::vector<VoronoiCell>& cells() const { return cells_; }
  const AdjacencyGraph& adjacency() const { return adjacency_; }
  bool touches_frame(std::size_t site) const { return touches_frame_[site]; }

  /// Outline of the union of the member cells. Throws
  /// Error(validation, "dissolve_failed") unless it is a single ring.
  Ring dissolve(std::span<const std::size_t> members) const;

  /// Boundary loops of the union of the member cells; holes come out
  /// clockwise.
  std::vector<Ring> dissolve_loops(std::span<const std::size_t> members) const;

  /// True if the union of cells flagged in `member_mask` would surround
  /// some cell outside it, i.e. the union has a hole.
  bool has_hole(const std::vector<char>& member_mask) const;

 private:
  BoundingBox frame_;
  std::vector<VoronoiCell> cells_;
  AdjacencyGraph adjacency_;
  std::vector<char> touches_frame_;
  std::vector<Point> vertices_;                       // snapped cell vertices
  std::vector<std::vector<std::size_t>> cell_vertex_ids_;
};

/// Voronoi adjacency of the dataset's locations.
AdjacencyGraph voronoi_adjacency(const SpatialDataset& ds);

}  // namespace sbss
