#include "sbss/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "sbss/error.hpp"

namespace sbss {

std::size_t AdjacencyGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbours) twice += nb.size();
  return twice / 2;
}

bool AdjacencyGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& nb = neighbours[i];
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < neighbours.size(); ++i) {
    for (std::size_t j : neighbours[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

bool AdjacencyGraph::connected(std::span<const std::size_t> members) const {
  std::vector<char> in(size(), members.empty() ? 1 : 0);
  std::size_t total = size();
  if (!members.empty()) {
    for (std::size_t m : members) in[m] = 1;
    total = members.size();
  }
  if (total == 0) return true;
  const std::size_t start = members.empty() ? 0 : members.front();
  std::vector<char> seen(size(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : neighbours[v]) {
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == total;
}

namespace {

struct LabelledVertex {
  Point p;
  std::size_t site;  // label of the edge starting here
};

// Keep the side of the bisector closer to `site`.
std::vector<LabelledVertex> clip(const std::vector<LabelledVertex>& poly, Point site,
                                 Point other, std::size_t other_index, double dedupe) {
  const Point normal = other - site;
  const Point mid = 0.5 * (site + other);
  auto side = [&](Point p) { return dot(p - mid, normal); };

  std::vector<LabelledVertex> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) {
    const LabelledVertex& cur = poly[k];
    const LabelledVertex& nxt = poly[(k + 1) % n];
    const double fc = side(cur.p);
    const double fn = side(nxt.p);
    const bool cur_in = fc <= 0.0;
    const bool nxt_in = fn <= 0.0;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      const double t = fc / (fc - fn);
      const Point x = cur.p + t * (nxt.p - cur.p);
      out.push_back({x, cur_in ? other_index : cur.site});
    }
  }

  // Collapse zero-length edges; the surviving vertex keeps the label of the
  // edge that leaves it.
  std::vector<LabelledVertex> cleaned;
  cleaned.reserve(out.size());
  for (const auto& v : out) {
    if (!cleaned.empty() && nearly_equal(cleaned.back().p, v.p, dedupe)) {
      cleaned.back() = v;
    } else {
      cleaned.push_back(v);
    }
  }
  while (cleaned.size() > 1 && nearly_equal(cleaned.back().p, cleaned.front().p, dedupe)) {
    cleaned.front().p = cleaned.back().p;
    cleaned.pop_back();
  }
  return cleaned;
}

bool collinear(std::span<const Point> pts, double scale) {
  const Point a = pts[0];
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = distance(a, pts[i]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (best <= 0.0) return true;
  const Point dir = pts[far] - a;
  for (const Point& p : pts) {
    if (std::abs(cross(dir, p - a)) / best > 1e-9 * scale) return false;
  }
  return true;
}

// Union-find over vertex indices.
struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

VoronoiDiagram::VoronoiDiagram(std::span<const Point> sites) {
  const std::size_t n = sites.size();
  if (n < 3) throw_validation("degenerate_voronoi", "degenerate for Voronoi: fewer than 3 locations");
  const BoundingBox box = bounding_box(sites);
  const double diag = std::hypot(box.width(), box.height());
  if (collinear(sites, diag)) {
    throw_validation("degenerate_voronoi", "degenerate for Voronoi: locations are collinear");
  }

  const double pad_x = 0.05 * box.width();
  const double pad_y = 0.05 * box.height();
  frame_ = {box.min_x - pad_x, box.min_y - pad_y, box.max_x + pad_x, box.max_y + pad_y};
  const double frame_diag = std::hypot(frame_.width(), frame_.height());
  const double dedupe = 1e-12 * frame_diag;
  const double min_edge = 1e-9 * frame_diag;

  cells_.resize(n);
  adjacency_.neighbours.assign(n, {});
  touches_frame_.assign(n, 0);

  std::vector<std::size_t> order(n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point s = sites[i];
    for (std::size_t j = 0; j < n; ++j) dist[j] = distance(s, sites[j]);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
    });

    std::vector<LabelledVertex> poly = {{{frame_.min_x, frame_.min_y}, kFrameSite},
                                        {{frame_.max_x, frame_.min_y}, kFrameSite},
                                        {{frame_.max_x, frame_.max_y}, kFrameSite},
                                        {{frame_.min_x, frame_.max_y}, kFrameSite}};
    auto radius = [&] {
      double r = 0.0;
      for (const auto& v : poly) r = std::max(r, distance(s, v.p));
      return r;
    };
    double reach = radius();
    for (std::size_t j : order) {
      if (j == i) continue;
      if (dist[j] > 2.0 * reach * (1.0 + 1e-12)) break;
      poly = clip(poly, s, sites[j], j, dedupe);
      reach = radius();
    }

    VoronoiCell& cell = cells_[i];
    for (std::size_t k = 0; k < poly.size(); ++k) {
      cell.ring.push_back(poly[k].p);
      cell.edge_sites.push_back(poly[k].site);
      const double len = distance(poly[k].p, poly[(k + 1) % poly.size()].p);
      if (len <= min_edge) continue;
      if (poly[k].site == kFrameSite) {
        touches_frame_[i] = 1;
      } else {
        adjacency_.neighbours[i].push_back(poly[k].site);
        adjacency_.neighbours[poly[k].site].push_back(i);
      }
    }
  }
  for (auto& nb : adjacency_.neighbours) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  // Snap coincident cell vertices to shared ids so dissolving can cancel
  // interior edges exactly.
  const double snap = 1e-8 * frame_diag;
  std::vector<Point> raw;
  std::vector<std::size_t> owner_offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    owner_offset[i + 1] = owner_offset[i] + cells_[i].ring.size();
    raw.insert(raw.end(), cells_[i].ring.begin(), cells_[i].ring.end());
  }
  Dsu dsu(raw.size());
  std::unordered_map<long long, std::vector<std::size_t>> buckets;
  auto key = [&](long long gx, long long gy) { return gx * 73856093LL ^ gy * 19349663LL; };
  for (std::size_t v = 0; v < raw.size(); ++v) {
    const long long gx = static_cast<long long>(std::floor((raw[v].x - frame_.min_x) / snap));
    const long long gy = static_cast<long long>(std::floor((raw[v].y - frame_.min_y) / snap));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(gx + dx, gy + dy));
        if (it == buckets.end()) continue;
        for (std::size_t w : it->second) {
          if (nearly_equal(raw[v], raw[w], snap)) dsu.unite(v, w);
        }
      }
    }
    buckets[key(gx, gy)].push_back(v);
  }
  std::vector<std::size_t> compact(raw.size(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < raw.size(); ++v) {
    const std::size_t root = dsu.find(v);
    if (compact[root] == static_cast<std::size_t>(-1)) {
      compact[root] = vertices_.size();
      vertices_.push_back(raw[root]);
    }
  }
  cell_vertex_ids_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& ids = cell_vertex_ids_[i];
    for (std::size_t v = owner_offset[i]; v < owner_offset[i + 1]; ++v) {
      const std::size_t id = compact[dsu.find(v)];
      if (ids.empty() || ids.back() != id) ids.push_back(id);
    }
    while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
  }
}

std::vector<Ring> VoronoiDiagram::dissolve_loops(std::span<const std::size_t> members) const {
  // Directed boundary edges; an interior edge appears once in each
  // direction and cancels.
  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  for (std::size_t m : members) {
    const auto& ids = cell_vertex_ids_[m];
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::size_t u = ids[k];
      const std::size_t v = ids[(k + 1) % ids.size()];
      if (u == v) continue;
      auto rev = directed.find({v, u});
      if (rev != directed.end()) {
        if (--rev->second == 0) directed.erase(rev);
      } else {
        ++directed[{u, v}];
      }
    }
  }

  std::multimap<std::size_t, std::size_t> next;
  for (const auto& [edge, count] : directed) {
    for (int c = 0; c < count; ++c) next.emplace(edge.first, edge.second);
  }

  std::vector<Ring> loops;
  while (!next.empty()) {
    auto it = next.begin();
    const std::size_t start = it->first;
    std::size_t cur = start;
    Ring loop;
    while (true) {
      auto step = next.find(cur);
      if (step == next.end()) break;
      loop.push_back(vertices_[cur]);
      cur = step->second;
      next.erase(step);
      if (cur == start) break;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

Ring VoronoiDiagram::dissolve(std::span<const std::size_t> members) const {
  auto loops = dissolve_loops(members);
  if (loops.size() != 1) {
    throw_validation("dissolve_failed",
                     "cells do not form a single region without holes (" +
                         std::to_string(loops.size()) + " boundary loops)");
  }
  return without_collinear(loops.front(), 1e-12 * std::hypot(frame_.width(), frame_.height()));
}

bool VoronoiDiagram::has_hole(const std::vector<char>& member_mask) const {
  const std::size_t n = cells_.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack;
  std::size_t outside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (member_mask[i]) continue;
    ++outside;
    if (touches_frame_[i]) {
      seen[i] = 1;
      stack.push_back(i);
    }
  }
  std::size_t reached = stack.size();
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adjacency_.neighbours[v]) {
      if (!member_mask[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached != outside;
}

AdjacencyGraph voronoi_adjacency(const SpatialDataset& ds) {
  return VoronoiDiagram(ds.locations()).adjacency();
}

}  // namespace sbss
