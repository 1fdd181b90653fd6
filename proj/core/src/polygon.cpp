#include "sbss/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sbss {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool nearly_equal(Point a, Point b, double eps) { return distance(a, b) <= eps; }

BoundingBox bounding_box(std::span<const Point> points) {
  BoundingBox box{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const Point& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex to limit cancellation on large coordinates.
  const Point o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    twice += cross(ring[i] - o, ring[i + 1] - o);
  }
  return 0.5 * twice;
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

Containment locate(Point p, std::span<const Point> ring, double eps) {
  const std::size_t n = ring.size();
  if (n < 3) return Containment::outside;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[j];
    const Point b = ring[i];
    if (point_segment_distance(p, a, b) <= eps) return Containment::boundary;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? Containment::inside : Containment::outside;
}

namespace {

double orientation(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool segments_touch(Point a0, Point a1, Point b0, Point b1, double eps) {
  const double o1 = orientation(a0, a1, b0);
  const double o2 = orientation(a0, a1, b1);
  const double o3 = orientation(b0, b1, a0);
  const double o4 = orientation(b0, b1, a1);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
      ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  return point_segment_distance(b0, a0, a1) <= eps ||
         point_segment_distance(b1, a0, a1) <= eps ||
         point_segment_distance(a0, b0, b1) <= eps ||
         point_segment_distance(a1, b0, b1) <= eps;
}

}  // namespace

bool is_simple(std::span<const Point> ring, double eps) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  if (std::abs(signed_area(ring)) <= eps * eps) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (nearly_equal(ring[i], ring[(i + 1) % n], eps)) return false;
  }

  struct Seg {
    Point a, b;
    double min_x, max_x, min_y, max_y;
  };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    segs[i] = {a, b, std::min(a.x, b.x) - eps, std::max(a.x, b.x) + eps,
               std::min(a.y, b.y) - eps, std::max(a.y, b.y) + eps};
  }
  // Sweep on x so that large rings stay close to linear in practice.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return segs[l].min_x < segs[r].min_x; });

  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::size_t j = order[oj];
      if (segs[j].min_x > segs[i].max_x) break;
      if (segs[j].min_y > segs[i].max_y || segs[j].max_y < segs[i].min_y) continue;
      const bool adjacent = (j == (i + 1) % n) || (i == (j + 1) % n);
      if (adjacent) {
        // Neighbouring edges share one vertex; they must not fold back.
        const std::size_t first = (j == (i + 1) % n) ? i : j;
        const std::size_t second = (first == i) ? j : i;
        if (n == 3) continue;
        if (point_segment_distance(segs[first].a, segs[second].a, segs[second].b) <= eps ||
            point_segment_distance(segs[second].b, segs[first].a, segs[first].b) <= eps) {
          return false;
        }
        continue;
      }
      if (segments_touch(segs[i].a, segs[i].b, segs[j].a, segs[j].b, eps)) return false;
    }
  }
  return true;
}

Ring normalized_ring(std::span<const Point> ring, double eps) {
  Ring out;
  out.reserve(ring.size());
  for (const Point& p : ring) {
    if (out.empty() || !nearly_equal(out.back(), p, eps)) out.push_back(p);
  }
  while (out.size() > 1 && nearly_equal(out.front(), out.back(), eps)) out.pop_back();
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

Ring without_collinear(std::span<const Point> ring, double eps) {
  Ring out(ring.begin(), ring.end());
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() > 3; ++i) {
      const Point prev = out[(i + out.size() - 1) % out.size()];
      const Point next = out[(i + 1) % out.size()];
      const Point cur = out[i];
      if (point_segment_distance(cur, prev, next) <= eps &&
          dot(cur - prev, next - cur) >= 0.0) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return out;
}

std::vector<SegmentHit> intersect_segments(Point a0, Point a1, Point b0, Point b1,
                                           double eps) {
  std::vector<SegmentHit> hits;
  const Point r = a1 - a0;
  const Point s = b1 - b0;
  const double len_r = std::hypot(r.x, r.y);
  const double len_s = std::hypot(s.x, s.y);
  if (len_r == 0.0 || len_s == 0.0) return hits;

  const double denom = cross(r, s);
  const Point qp = b0 - a0;
  if (std::abs(denom) > 1e-12 * len_r * len_s) {
    double t = cross(qp, s) / denom;
    double u = cross(qp, r) / denom;
    const double tol_t = eps / len_r;
    const double tol_u = eps / len_s;
    if (t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u) return hits;
    t = std::clamp(t, 0.0, 1.0);
    u = std::clamp(u, 0.0, 1.0);
    hits.push_back({t, u, a0 + t * r});
    return hits;
  }

  // Parallel: only collinear overlaps count.
  if (std::abs(cross(qp, r)) / len_r > eps) return hits;
  const double rr = dot(r, r);
  double t0 = dot(b0 - a0, r) / rr;
  double t1 = dot(b1 - a0, r) / rr;
  if (t0 > t1) std::swap(t0, t1);
  const double lo = std::max(0.0, t0);
  const double hi = std::min(1.0, t1);
  const double tol_t = eps / len_r;
  if (lo > hi + tol_t) return hits;
  const double ss = dot(s, s);
  auto hit_at = [&](double t) {
    const Point p = a0 + t * r;
    return SegmentHit{t, std::clamp(dot(p - b0, s) / ss, 0.0, 1.0), p};
  };
  hits.push_back(hit_at(lo));
  if (hi - lo > tol_t) hits.push_back(hit_at(hi));
  return hits;
}

}  // namespace sbss
