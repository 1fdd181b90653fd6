#include "sbss/redcap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "sbss/error.hpp"
#include "sbss/parallel.hpp"

namespace sbss {

double edge_distance(const Eigen::MatrixXd& values, std::size_t i, std::size_t j) {
  const Eigen::VectorXd a = values.row(static_cast<Eigen::Index>(i)).transpose();
  const Eigen::VectorXd b = values.row(static_cast<Eigen::Index>(j)).transpose();
  return (a * a.transpose() - b * b.transpose()).norm();
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Heterogeneity of the rows in `rows` (modified: centered in place).
double heterogeneity_of(RowMajor& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index p = rows.cols();
  if (n <= 1) return 0.0;
  rows.rowwise() -= rows.colwise().mean();
  const Eigen::MatrixXd cov = rows.transpose() * rows / static_cast<double>(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* a = rows.row(i).data();
    double diag = 0.0;
    double off = 0.0;
    for (Eigen::Index d = 0; d < p; ++d) {
      const double ad = a[d];
      const double* c = cov.col(d).data();
      const double t = ad * ad - c[d];
      diag += t * t;
      for (Eigen::Index e = d + 1; e < p; ++e) {
        const double u = ad * a[e] - c[e];
        off += u * u;
      }
    }
    total += std::sqrt(diag + 2.0 * off);
  }
  return total;
}

void gather(const Eigen::MatrixXd& values, std::span<const std::size_t> members,
            RowMajor& out) {
  out.resize(static_cast<Eigen::Index>(members.size()), values.cols());
  for (std::size_t r = 0; r < members.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(members[r]));
  }
}

}  // namespace

double region_heterogeneity(const Eigen::MatrixXd& values,
                            std::span<const std::size_t> members) {
  RowMajor rows;
  gather(values, members, rows);
  return heterogeneity_of(rows);
}

Eigen::MatrixXd standardized(const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values.rowwise() - values.colwise().mean();
  const double n = static_cast<double>(values.rows());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / n);
    if (sd > 0.0 && std::isfinite(sd)) {
      out.col(c) /= sd;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

RegionTree::RegionTree(const SpatialDataset& ds, const VoronoiDiagram& voronoi,
                       std::size_t k_max, const RedcapOptions& options)
    : voronoi_(voronoi), n_(ds.size()) {
  if (k_max == 0) throw_validation("invalid_region_count", "region count must be at least 1");
  if (k_max > n_) {
    throw_validation("invalid_region_count",
                     "region count " + std::to_string(k_max) + " exceeds location count " +
                         std::to_string(n_));
  }
  if (voronoi.cells().size() != n_) {
    throw_validation("shape_mismatch", "Voronoi diagram does not match the dataset");
  }
  const Eigen::MatrixXd values =
      options.standardize ? standardized(ds.variables()) : ds.variables();
  build_tree(values, options.linkage);
  cut_greedily(values, k_max, options.avoid_holes);
}

void RegionTree::build_tree(const Eigen::MatrixXd& values, Linkage linkage) {
  const std::size_t n = n_;
  const auto& graph = voronoi_.adjacency();
  if (!graph.connected()) {
    throw_numeric("regionalization_failed", "Voronoi adjacency graph is not connected");
  }

  struct Link {
    double dist;
    std::size_t a, b;
  };
  auto shorter = [](const Link& l, const Link& r) {
    if (l.dist != r.dist) return l.dist < r.dist;
    return std::minmax(l.a, l.b) < std::minmax(r.a, r.b);
  };

  // Cluster-to-cluster sums of pairwise edge distances (full-order linkage).
  Eigen::MatrixXd sums;
  if (linkage == Linkage::full_order_average) {
    sums.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t j) {
      const auto jj = static_cast<Eigen::Index>(j);
      sums(jj, jj) = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) {
        sums(static_cast<Eigen::Index>(i), jj) = edge_distance(values, i, j);
      }
    });
    for (Eigen::Index j = 0; j < sums.cols(); ++j) {
      for (Eigen::Index i = j + 1; i < sums.rows(); ++i) sums(j, i) = sums(i, j);
    }
  }

  std::vector<std::size_t> size(n, 1);
  std::vector<char> alive(n, 1);
  std::vector<std::map<std::size_t, Link>> near(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : graph.neighbours[i]) {
      if (i < j) {
        const Link link{edge_distance(values, i, j), i, j};
        near[i][j] = link;
        near[j][i] = link;
      }
    }
  }

  auto linkage_value = [&](std::size_t a, std::size_t b) {
    if (linkage == Linkage::first_order_single) return near[a].at(b).dist;
    return sums(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) /
           (static_cast<double>(size[a]) * static_cast<double>(size[b]));
  };

  edges_.clear();
  edges_.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (const auto& [b, link] : near[a]) {
        if (b <= a) continue;
        const double v = linkage_value(a, b);
        if (!found || v < best) {
          best = v;
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    if (!found) throw_numeric("regionalization_failed", "contiguity graph is disconnected");

    const Link join = near[best_a].at(best_b);
    edges_.push_back({join.a, join.b, join.dist});

    // Merge best_b into best_a.
    const std::size_t keep = best_a;
    const std::size_t gone = best_b;
    if (linkage == Linkage::full_order_average) {
      const auto k = static_cast<Eigen::Index>(keep);
      const auto g = static_cast<Eigen::Index>(gone);
      sums.col(k) += sums.col(g);
      sums.row(k) = sums.col(k).transpose();
    }
    size[keep] += size[gone];
    alive[gone] = 0;
    near[keep].erase(gone);
    for (const auto& [c, link] : near[gone]) {
      if (c == keep) continue;
      auto it = near[keep].find(c);
      if (it == near[keep].end() || shorter(link, it->second)) near[keep][c] = link;
      near[c].erase(gone);
      near[c][keep] = near[keep][c];
    }
    near[gone].clear();
  }
}

void RegionTree::cut_greedily(const Eigen::MatrixXd& values, std::size_t k_max,
                              bool avoid_holes) {
  const std::size_t n = n_;
  const std::size_t m = edges_.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < m; ++e) {
    adj[edges_[e].a].emplace_back(edges_[e].b, e);
    adj[edges_[e].b].emplace_back(edges_[e].a, e);
  }
  std::vector<char> cut(m, 0);
  std::vector<double> decrease(m, std::numeric_limits<double>::quiet_NaN());

  // Nodes reachable from `start` without crossing cut edges or `skip`.
  auto reach = [&](std::size_t start, std::size_t skip) {
    std::vector<std::size_t> out{start};
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    for (std::size_t head = 0; head < out.size(); ++head) {
      for (const auto& [w, e] : adj[out[head]]) {
        if (cut[e] || e == skip || seen[w]) continue;
        seen[w] = 1;
        out.push_back(w);
      }
    }
    return out;
  };

  // Recomputes candidate decreases for every edge inside the component.
  auto evaluate = [&](const std::vector<std::size_t>& members, double component_hg) {
    if (members.size() < 2) return;
    std::vector<std::size_t> order;
    std::vector<std::size_t> parent_edge(n, static_cast<std::size_t>(-1));
    std::vector<std::size_t> tin(n, 0), tout(n, 0);
    std::vector<char> seen(n, 0);
    // Iterative DFS producing a pre-order with contiguous subtrees.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{members.front(), 0}};
    seen[members.front()] = 1;
    tin[members.front()] = 0;
    order.push_back(members.front());
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        const auto [w, e] = adj[v][next++];
        if (cut[e] || seen[w]) continue;
        seen[w] = 1;
        parent_edge[w] = e;
        tin[w] = order.size();
        order.push_back(w);
        stack.emplace_back(w, 0);
      } else {
        tout[v] = order.size();
        stack.pop_back();
      }
    }

    std::vector<std::size_t> children(order.begin() + 1, order.end());
    parallel_for(children.size(), [&](std::size_t c) {
      const std::size_t v = children[c];
      const std::span<const std::size_t> all(order);
      std::vector<std::size_t> inside(all.begin() + static_cast<std::ptrdiff_t>(tin[v]),
                                      all.begin() + static_cast<std::ptrdiff_t>(tout[v]));
      std::vector<std::size_t> outside(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(tin[v]));
      outside.insert(outside.end(), all.begin() + static_cast<std::ptrdiff_t>(tout[v]), all.end());
      RowMajor rows;
      gather(values, inside, rows);
      const double hg_in = heterogeneity_of(rows);
      gather(values, outside, rows);
      const double hg_out = heterogeneity_of(rows);
      decrease[parent_edge[v]] = component_hg - hg_in - hg_out;
    });
  };

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double total0 = region_heterogeneity(values, all);
  std::vector<double> component_hg;  // indexed by component root (smallest id is irrelevant)
  std::vector<std::size_t> comp_of(n, 0);
  component_hg.push_back(total0);
  heterogeneity_.assign(1, total0);
  evaluate(all, total0);

  while (cuts_.size() + 1 < k_max) {
    std::vector<std::size_t> candidates;
    for (std::size_t e = 0; e < m; ++e) {
      if (!cut[e] && !std::isnan(decrease[e])) candidates.push_back(e);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t l, std::size_t r) {
      return decrease[l] != decrease[r] ? decrease[l] > decrease[r] : l < r;
    });

    bool done = false;
    for (std::size_t e : candidates) {
      std::vector<std::size_t> side_a = reach(edges_[e].a, e);
      std::vector<std::size_t> side_b = reach(edges_[e].b, e);
      if (avoid_holes) {
        std::vector<char> mask(n, 0);
        for (std::size_t v : side_a) mask[v] = 1;
        if (voronoi_.has_hole(mask)) continue;
        std::fill(mask.begin(), mask.end(), 0);
        for (std::size_t v : side_b) mask[v] = 1;
        if (voronoi_.has_hole(mask)) continue;
      }
      cut[e] = 1;
      cuts_.push_back(e);
      decrease[e] = std::numeric_limits<double>::quiet_NaN();

      const std::size_t old = comp_of[edges_[e].a];
      const std::size_t fresh = component_hg.size();
      const double hg_a = region_heterogeneity(values, side_a);
      const double hg_b = region_heterogeneity(values, side_b);
      component_hg[old] = hg_a;
      component_hg.push_back(hg_b);
      for (std::size_t v : side_b) comp_of[v] = fresh;
      evaluate(side_a, hg_a);
      evaluate(side_b, hg_b);
      heterogeneity_.push_back(std::accumulate(component_hg.begin(), component_hg.end(), 0.0));
      done = true;
      break;
    }
    if (!done) {
      throw_numeric("regionalization_failed",
                    "no admissible cut for " + std::to_string(cuts_.size() + 2) + " regions");
    }
  }
}

std::vector<std::size_t> RegionTree::labels(std::size_t k) const {
  if (k == 0 || k > max_regions()) {
    throw_validation("invalid_region_count", "region count out of range");
  }
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> removed(edges_.size(), 0);
  for (std::size_t c = 0; c + 1 < k; ++c) removed[cuts_[c]] = 1;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (removed[e]) continue;
    const std::size_t a = find(edges_[e].a);
    const std::size_t b = find(edges_[e].b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> label(n_);
  std::map<std::size_t, std::size_t> numbering;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = numbering.emplace(root, numbering.size());
    label[i] = it->second;
  }
  return label;
}

Regionalization RegionTree::regionalization(std::size_t k) const {
  const auto label = labels(k);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n_; ++i) members[label[i]].push_back(i);
  Regionalization out;
  for (std::size_t r = 0; r < k; ++r) {
    out.regions.emplace_back(static_cast<RegionId>(r), voronoi_.dissolve(members[r]));
  }
  return out;
}

Regionalization covariance_regionalization(const SpatialDataset& ds, std::size_t k,
                                           const RedcapOptions& options) {
  if (k == 0 || k > ds.size()) {
    throw_validation("invalid_region_count",
                     "region count " + std::to_string(k) + " outside 1.." +
                         std::to_string(ds.size()));
  }
  const VoronoiDiagram voronoi(ds.locations());
  return RegionTree(ds, voronoi, k, options).regionalization(k);
}

}  // namespace sbss
