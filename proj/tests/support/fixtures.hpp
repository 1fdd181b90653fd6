// Shared generators and brute-force oracles for the unit and acceptance
// suites. Everything here is deliberately naive: direct double loops over
// pairs, exhaustive enumeration, no reuse of library shortcuts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbss/covariance.hpp"
#include "sbss/model.hpp"
#include "sbss/redcap.hpp"
#include "sbss/voronoi.hpp"

namespace fixtures {

using sbss::Point;

inline std::vector<Point> uniform_points(std::mt19937_64& rng, std::size_t n,
                                         double side = 1.0) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

inline Eigen::MatrixXd normal_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                     Eigen::Index cols) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

inline std::vector<std::string> names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < p; ++v) out.push_back("v" + std::to_string(v + 1));
  return out;
}

inline sbss::SpatialDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t p,
                                           double side = 1.0) {
  return sbss::SpatialDataset(uniform_points(rng, n, side),
                              normal_matrix(rng, static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(p)),
                              names(p));
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

/// Square region comfortably containing [0, side]^2.
inline sbss::Regionalization whole_domain(double side = 1.0, sbss::RegionId id = 0) {
  const double lo = -0.01 * side, hi = 1.01 * side;
  const std::vector<Point> ring = {{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}};
  sbss::Regionalization r;
  r.regions.emplace_back(id, ring);
  return r;
}

inline sbss::Region rectangle(sbss::RegionId id, double x0, double y0, double x1, double y1) {
  const std::vector<Point> ring = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return sbss::Region(id, ring);
}

/// 0/1 neighbourhood by direct evaluation of the ring on every ordered pair.
inline std::vector<std::vector<int>> brute_neighbourhood(const std::vector<Point>& pts,
                                                         double inner, double outer) {
  const std::size_t n = pts.size();
  std::vector<std::vector<int>> k(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      k[i][j] = (inner <= d && d <= outer) ? 1 : 0;
    }
  return k;
}

/// LCov by explicit double loop: (1/n) sum_{i != j} K_ij (x_i - m)(x_j - m)^T,
/// then symmetrized.
inline Eigen::MatrixXd brute_local_covariance(const Eigen::MatrixXd& x,
                                              const std::vector<std::vector<int>>& k) {
  const Eigen::Index n = x.rows(), p = x.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < n; ++i) mean += x.row(i).transpose();
  mean /= static_cast<double>(n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
      const Eigen::VectorXd a = x.row(i).transpose() - mean;
      const Eigen::VectorXd b = x.row(j).transpose() - mean;
      for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index c = 0; c < p; ++c) acc(r, c) += a(r) * b(c);
    }
  acc /= static_cast<double>(n);
  return 0.5 * (acc + acc.transpose());
}

/// Population covariance by explicit loops.
inline Eigen::MatrixXd brute_covariance(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows(), p = x.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b) {
      double ma = 0, mb = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        ma += x(i, a);
        mb += x(i, b);
      }
      ma /= static_cast<double>(n);
      mb /= static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) c(a, b) += (x(i, a) - ma) * (x(i, b) - mb);
      c(a, b) /= static_cast<double>(n);
    }
  return c;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index p) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal_matrix(rng, p, p));
  return qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
}

/// Heterogeneity by definition: sum_i ||(x_i - m)(x_i - m)^T - C||_F.
inline double brute_heterogeneity(const Eigen::MatrixXd& x, const std::vector<std::size_t>& m) {
  if (m.size() < 2) return 0.0;
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(m.size()), x.cols());
  for (std::size_t k = 0; k < m.size(); ++k)
    sub.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(m[k]));
  const Eigen::MatrixXd c = brute_covariance(sub);
  const Eigen::VectorXd mean = sub.colwise().mean().transpose();
  double total = 0.0;
  for (Eigen::Index i = 0; i < sub.rows(); ++i) {
    const Eigen::VectorXd d = sub.row(i).transpose() - mean;
    total += (d * d.transpose() - c).norm();
  }
  return total;
}

/// Minimum total heterogeneity over all bipartitions into two parts that
/// are each connected in `graph` (and hole-free when `voronoi` is given).
inline double exhaustive_two_region_optimum(const Eigen::MatrixXd& x,
                                            const sbss::AdjacencyGraph& graph,
                                            const sbss::VoronoiDiagram* voronoi) {
  const std::size_t n = graph.size();
  double best = std::numeric_limits<double>::infinity();
  // Fix location 0 in part A to visit each bipartition once.
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<std::size_t> a{0}, b;
    for (std::size_t i = 1; i < n; ++i) ((mask >> (i - 1)) & 1u ? b : a).push_back(i);
    if (b.empty()) continue;
    if (!graph.connected(a) || !graph.connected(b)) continue;
    if (voronoi) {
      std::vector<char> ma(n, 0), mb(n, 0);
      for (auto i : a) ma[i] = 1;
      for (auto i : b) mb[i] = 1;
      if (voronoi->has_hole(ma) || voronoi->has_hole(mb)) continue;
    }
    best = std::min(best, brute_heterogeneity(x, a) + brute_heterogeneity(x, b));
  }
  return best;
}

/// Latent fields for the recovery study: iid noise at the locations,
/// averaged over discs of the given radii, then standardized.
inline Eigen::MatrixXd moving_average_fields(std::mt19937_64& rng,
                                             const std::vector<Point>& pts,
                                             const std::vector<double>& radii) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  const auto q = static_cast<Eigen::Index>(radii.size());
  const Eigen::MatrixXd noise = normal_matrix(rng, n, q);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& a = pts[static_cast<std::size_t>(i)];
        const auto& b = pts[static_cast<std::size_t>(j)];
        if (std::hypot(a.x - b.x, a.y - b.y) <= radii[static_cast<std::size_t>(k)])
          sum += noise(j, k);
      }
      z(i, k) = sum;
    }
    const double mean = z.col(k).mean();
    z.col(k).array() -= mean;
    z.col(k) /= std::sqrt(z.col(k).squaredNorm() / static_cast<double>(n));
  }
  return z;
}

inline double abs_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return std::abs(ca.dot(cb)) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

/// Best assignment of recovered to true components maximizing the minimum
/// absolute correlation; returns the per-component correlations.
inline std::vector<double> matched_correlations(const Eigen::MatrixXd& truth,
                                                const Eigen::MatrixXd& recovered) {
  const auto q = static_cast<std::size_t>(truth.cols());
  std::vector<std::size_t> perm = all_indices(q);
  std::vector<double> best;
  double best_min = -1.0;
  do {
    std::vector<double> c(q);
    for (std::size_t k = 0; k < q; ++k)
      c[k] = abs_correlation(truth.col(static_cast<Eigen::Index>(k)),
                             recovered.col(static_cast<Eigen::Index>(perm[k])));
    const double m = *std::min_element(c.begin(), c.end());
    if (m > best_min) {
      best_min = m;
      best = c;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace fixtures
