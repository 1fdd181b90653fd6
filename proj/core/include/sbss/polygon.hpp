#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbss {

/// Two coordinates closer than this (meters) are considered equal.
inline constexpr double kGeometryEpsilon = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double distance(Point a, Point b);
bool nearly_equal(Point a, Point b, double eps = kGeometryEpsilon);

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Point p, double eps = 0.0) const {
    return p.x >= min_x - eps && p.x <= max_x + eps && p.y >= min_y - eps &&
           p.y <= max_y + eps;
  }
};

BoundingBox bounding_box(std::span<const Point> points);

/// Open vertex ring: the closing edge runs from back() to front().
using Ring = std::vector<Point>;

/// Shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Point> ring);

enum class Containment { outside, boundary, inside };

/// Closed point-in-polygon test. Points within `eps` of an edge are
/// reported as `boundary`.
Containment locate(Point p, std::span<const Point> ring,
                   double eps = kGeometryEpsilon);

double point_segment_distance(Point p, Point a, Point b);

/// True if the ring has at least three vertices, non-zero area, and no two
/// non-adjacent edges touch.
bool is_simple(std::span<const Point> ring, double eps = kGeometryEpsilon);

/// Drops repeated consecutive vertices and the closing duplicate, then
/// orients the ring counterclockwise.
Ring normalized_ring(std::span<const Point> ring, double eps = kGeometryEpsilon);

/// Removes vertices lying on the straight line between their neighbours.
Ring without_collinear(std::span<const Point> ring, double eps = kGeometryEpsilon);

struct SegmentHit {
  double t = 0.0;  // parameter along the first segment
  double u = 0.0;  // parameter along the second segment
  Point at;
};

/// Intersections of segments [a0,a1] and [b0,b1]. Collinear overlaps report
/// both ends of the shared piece.
std::vector<SegmentHit> intersect_segments(Point a0, Point a1, Point b0, Point b1,
                                           double eps = kGeometryEpsilon);

}  // namespace sbss
