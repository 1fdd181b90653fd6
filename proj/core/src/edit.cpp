#include "sbss/edit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sbss/error.hpp"

namespace sbss {
namespace {

struct BoundaryHit {
  double along = 0.0;  // polyline parameter: segment index + t
  std::size_t edge = 0;
  double u = 0.0;      // parameter along the polygon edge
  Point at;
};

double scale_tolerance(const Ring& ring) {
  const BoundingBox b = bounding_box(ring);
  return std::max(kGeometryEpsilon, 1e-12 * std::hypot(b.width(), b.height()));
}

// Boundary walk in ring order from hit `from` to hit `to`, both included.
Ring walk(const Ring& ring, const BoundaryHit& from, const BoundaryHit& to) {
  const std::size_t n = ring.size();
  Ring out{from.at};
  if (from.edge == to.edge && to.u > from.u) {
    out.push_back(to.at);
    return out;
  }
  std::size_t k = (from.edge + 1) % n;
  while (true) {
    out.push_back(ring[k]);
    if (k == to.edge) break;
    k = (k + 1) % n;
  }
  out.push_back(to.at);
  return out;
}

[[noreturn]] void not_separating() {
  throw_validation("cut_does_not_separate", "cut does not separate region");
}

}  // namespace

std::pair<Region, Region> split_region(const Region& region, std::span<const Point> cut,
                                       RegionId second_id) {
  const Ring& ring = region.boundary();
  const std::size_t n = ring.size();
  if (cut.size() < 2) not_separating();
  const double eps = scale_tolerance(ring);

  std::vector<BoundaryHit> hits;
  for (std::size_t s = 0; s + 1 < cut.size(); ++s) {
    for (std::size_t e = 0; e < n; ++e) {
      for (const SegmentHit& h :
           intersect_segments(cut[s], cut[s + 1], ring[e], ring[(e + 1) % n], eps)) {
        BoundaryHit b{static_cast<double>(s) + h.t, e, h.u, h.at};
        if (nearly_equal(h.at, ring[(e + 1) % n], eps)) {
          b.edge = (e + 1) % n;
          b.u = 0.0;
          b.at = ring[b.edge];
        } else if (nearly_equal(h.at, ring[e], eps)) {
          b.u = 0.0;
          b.at = ring[e];
        }
        hits.push_back(b);
      }
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const BoundaryHit& a, const BoundaryHit& b) { return a.along < b.along; });
  std::vector<BoundaryHit> unique;
  for (const auto& h : hits) {
    if (!unique.empty() && nearly_equal(unique.back().at, h.at, eps)) continue;
    unique.push_back(h);
  }

  auto point_at = [&](double along) {
    const auto s = std::min(static_cast<std::size_t>(along), cut.size() - 2);
    const double t = along - static_cast<double>(s);
    return cut[s] + t * (cut[s + 1] - cut[s]);
  };

  // Classify each stretch of the polyline between consecutive boundary hits.
  struct Stretch {
    double from, to;
    int from_hit, to_hit;  // -1 for a polyline end
  };
  std::vector<Stretch> inside;
  const double end = static_cast<double>(cut.size() - 1);
  double prev = 0.0;
  int prev_hit = -1;
  for (std::size_t k = 0; k <= unique.size(); ++k) {
    const double next = k < unique.size() ? unique[k].along : end;
    const int next_hit = k < unique.size() ? static_cast<int>(k) : -1;
    if (next > prev) {
      if (region.locate(point_at(0.5 * (prev + next))) == Containment::inside) {
        inside.push_back({prev, next, prev_hit, next_hit});
      }
    }
    prev = next;
    prev_hit = next_hit;
  }

  if (inside.empty()) not_separating();
  if (inside.size() > 1) throw_validation("ambiguous_cut", "ambiguous cut");
  const Stretch chain_span = inside.front();
  if (chain_span.from_hit < 0 || chain_span.to_hit < 0) not_separating();

  const BoundaryHit& entry = unique[static_cast<std::size_t>(chain_span.from_hit)];
  const BoundaryHit& exit = unique[static_cast<std::size_t>(chain_span.to_hit)];
  if (nearly_equal(entry.at, exit.at, eps)) not_separating();

  Ring chain{entry.at};
  for (std::size_t k = 0; k < cut.size(); ++k) {
    const double along = static_cast<double>(k);
    if (along > chain_span.from && along < chain_span.to) chain.push_back(cut[k]);
  }
  chain.push_back(exit.at);

  Ring first = chain;
  const Ring back = walk(ring, exit, entry);
  first.insert(first.end(), back.begin() + 1, back.end() - 1);

  Ring second(chain.rbegin(), chain.rend());
  const Ring forth = walk(ring, entry, exit);
  second.insert(second.end(), forth.begin() + 1, forth.end() - 1);

  try {
    Region a(region.id(), first);
    Region b(second_id, second);
    const double total = region.area();
    if (std::abs(a.area() + b.area() - total) > 1e-9 * total) {
      throw_validation("ambiguous_cut", "ambiguous cut");
    }
    return {std::move(a), std::move(b)};
  } catch (const Error& e) {
    if (e.code() == "invalid_polygon") not_separating();
    throw;
  }
}

namespace {

// Adds vertices of `other` that fall on edges of `ring`.
Ring refined(const Ring& ring, const Ring& other, double eps) {
  Ring out;
  const std::size_t n = ring.size();
  for (std::size_t e = 0; e < n; ++e) {
    const Point a = ring[e];
    const Point b = ring[(e + 1) % n];
    out.push_back(a);
    std::vector<std::pair<double, Point>> extra;
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    for (const Point& p : other) {
      if (nearly_equal(p, a, eps) || nearly_equal(p, b, eps)) continue;
      if (point_segment_distance(p, a, b) <= eps) extra.emplace_back(dot(p - a, ab) / len2, p);
    }
    std::sort(extra.begin(), extra.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [t, p] : extra) out.push_back(p);
  }
  return out;
}

}  // namespace

Region merge_regions(const Region& a, const Region& b) {
  const double eps = std::max(scale_tolerance(a.boundary()), scale_tolerance(b.boundary()));

  for (const Point& p : b.boundary()) {
    if (locate(p, a.boundary(), eps) == Containment::inside) {
      throw_validation("regions_overlap", "regions overlap");
    }
  }
  for (const Point& p : a.boundary()) {
    if (locate(p, b.boundary(), eps) == Containment::inside) {
      throw_validation("regions_overlap", "regions overlap");
    }
  }

  const Ring ra = refined(a.boundary(), b.boundary(), eps);
  const Ring rb = refined(b.boundary(), a.boundary(), eps);

  std::vector<Point> pool;
  auto id_of = [&](Point p) {
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (nearly_equal(pool[k], p, eps)) return k;
    }
    pool.push_back(p);
    return pool.size() - 1;
  };

  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  std::size_t shared = 0;
  for (const Ring* ring : {&ra, &rb}) {
    std::vector<std::size_t> ids;
    for (const Point& p : *ring) ids.push_back(id_of(p));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::size_t u = ids[k];
      const std::size_t v = ids[(k + 1) % ids.size()];
      if (u == v) continue;
      auto rev = directed.find({v, u});
      if (rev != directed.end()) {
        ++shared;
        if (--rev->second == 0) directed.erase(rev);
      } else {
        ++directed[{u, v}];
      }
    }
  }
  if (shared == 0) throw_validation("regions_not_adjacent", "regions not adjacent");

  std::multimap<std::size_t, std::size_t> next;
  for (const auto& [edge, count] : directed) {
    for (int c = 0; c < count; ++c) next.emplace(edge.first, edge.second);
  }
  std::vector<Ring> loops;
  while (!next.empty()) {
    const std::size_t start = next.begin()->first;
    std::size_t cur = start;
    Ring loop;
    while (true) {
      auto step = next.find(cur);
      if (step == next.end()) break;
      loop.push_back(pool[cur]);
      cur = step->second;
      next.erase(step);
      if (cur == start) break;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }

  if (loops.size() != 1) {
    for (const Ring& loop : loops) {
      if (signed_area(loop) < 0.0) {
        throw_validation("merge_would_create_hole", "merge would create hole");
      }
    }
    throw_validation("regions_not_adjacent", "regions not adjacent");
  }

  Region merged(std::min(a.id(), b.id()), without_collinear(loops.front(), eps));
  const double expected = a.area() + b.area();
  if (std::abs(merged.area() - expected) > 1e-9 * expected) {
    throw_validation("regions_overlap", "regions overlap");
  }
  return merged;
}

}  // namespace sbss
