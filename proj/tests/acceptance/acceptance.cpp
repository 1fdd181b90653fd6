// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and nowhere else.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "sbss/cli.hpp"
#include "sbss/covariance.hpp"
#include "sbss/csv.hpp"
#include "sbss/edit.hpp"
#include "sbss/error.hpp"
#include "sbss/geometry.hpp"
#include "sbss/guidance.hpp"
#include "sbss/joint_diagonalization.hpp"
#include "sbss/metrics.hpp"
#include "sbss/redcap.hpp"
#include "sbss/sbss.hpp"
#include "sbss/serialize.hpp"
#include "sbss/variogram.hpp"

namespace fs = std::filesystem;
using namespace sbss;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. K equals the pairwise evaluation exactly; < 5 s.
Outcome neighbourhood_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  std::uniform_real_distribution<double> radius(0.0, 1.2);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = fixtures::uniform_points(rng, size(rng));
    double a = radius(rng), b = radius(rng);
    if (a > b) std::swap(a, b);
    const KernelRing ring{a, b};
    const auto oracle = fixtures::brute_neighbourhood(pts, a, b);
    const NeighbourhoodMatrix direct = neighbourhood_matrix(pts, ring);
    const DistanceMatrix d(pts);
    const auto members = fixtures::all_indices(pts.size());
    const NeighbourhoodMatrix table = neighbourhood_matrix(d, members, ring);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (direct(i, j) != (oracle[i][j] == 1)) ++mismatches;
        if (table(i, j) != (oracle[i][j] == 1)) ++mismatches;
      }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 5.0,
          std::to_string(mismatches) + " mismatched entries, " + fmt("%.2f s", t)};
}

// 2. LCov with an all-covering ring is -Cov_r (1e-10); LCov matches the
// double loop (1e-12) on 100 instances.
Outcome lcov_identities() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> size(3, 40), dim(1, 5);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  double worst_a = 0.0, worst_b = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SpatialDataset ds = fixtures::random_dataset(rng, size(rng), dim(rng));
    const auto members = fixtures::all_indices(ds.size());
    const double beyond = pairwise_distances(ds).max() + 1.0;
    const CovMatrix full = local_covariance(ds, members, KernelRing{0.0, beyond});
    const CovMatrix cov_r = region_covariance(ds, members);
    worst_a = std::max(worst_a, (full.values + cov_r.values).norm());

    double a = radius(rng), b = radius(rng);
    if (a > b) std::swap(a, b);
    const std::vector<Point> pts(ds.locations().begin(), ds.locations().end());
    const auto oracle =
        fixtures::brute_local_covariance(ds.variables(), fixtures::brute_neighbourhood(pts, a, b));
    const CovMatrix lcov = local_covariance(ds, members, KernelRing{a, b});
    worst_b = std::max(worst_b, (lcov.values - oracle).norm());
  }
  return {worst_a <= 1e-10 && worst_b <= 1e-12,
          "max |LCov + Cov_r| = " + fmt("%.2e", worst_a) + ", max |LCov - loop| = " +
              fmt("%.2e", worst_b)};
}

// 3. Whitened covariance is I (1e-10); W Cov W^T = I (1e-8) after run_sbss;
// 50 datasets, n = 200, p in 2..6.
Outcome whitening() {
  std::mt19937_64 rng(3);
  double worst_white = 0.0, worst_w = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 2 + static_cast<std::size_t>(trial) % 5;
    const auto pts = fixtures::uniform_points(rng, 200);
    const auto pe = static_cast<Eigen::Index>(p);
    const Eigen::MatrixXd mix = fixtures::normal_matrix(rng, pe, pe) +
                                2.0 * Eigen::MatrixXd::Identity(pe, pe);
    const Eigen::MatrixXd x = fixtures::normal_matrix(rng, 200, pe) * mix.transpose();
    const SpatialDataset ds(pts, x, fixtures::names(p));
    const Whitening w = whiten(ds);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(pe, pe);
    worst_white = std::max(worst_white, (fixtures::brute_covariance(w.whitened) - eye).norm());

    ParameterSetting setting;
    setting.regionalization = fixtures::whole_domain();
    setting.kernel.rings = {{0.0, 0.1}, {0.1, 0.25}};
    const SbssResult r = run_sbss(ds, setting);
    worst_w = std::max(worst_w,
                       (r.unmixing * global_covariance(ds).values * r.unmixing.transpose() - eye)
                           .norm());
  }
  return {worst_white <= 1e-10 && worst_w <= 1e-8,
          "max |Cov(Y) - I| = " + fmt("%.2e", worst_white) + ", max |W Cov W^T - I| = " +
              fmt("%.2e", worst_w)};
}

// 4. Exactly jointly diagonalizable sets reach off-diagonal mass < 1e-9;
// the criterion never increases per sweep on arbitrary symmetric sets.
Outcome joint_diagonalization() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Eigen::Index> dim(2, 8);
  double worst = 0.0;
  int increases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index p = dim(rng);
    const Eigen::MatrixXd q = fixtures::random_orthogonal(rng, p);
    std::vector<Eigen::MatrixXd> shared, arbitrary;
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd d = fixtures::normal_matrix(rng, p, 1).col(0);
      shared.push_back(q * d.asDiagonal() * q.transpose());
      const Eigen::MatrixXd g = fixtures::normal_matrix(rng, p, p);
      arbitrary.push_back(0.5 * (g + g.transpose()));
    }
    const JointDiagonalization exact = joint_diagonalize(shared);
    worst = std::max(worst, exact.off_diagonal_trace.back());

    const JointDiagonalization approx = joint_diagonalize(arbitrary);
    const auto& tr = approx.off_diagonal_trace;
    for (std::size_t s = 1; s < tr.size(); ++s) {
      if (tr[s] > tr[s - 1] * (1.0 + 1e-12)) ++increases;
    }
  }
  return {worst < 1e-9 && increases == 0,
          "max recovered off-diagonal mass " + fmt("%.2e", worst) + ", " +
              std::to_string(increases) + " increasing sweeps"};
}

// 5. Recovery of three moving-average fields: matched |corr| > 0.95 for
// every component in >= 95 of 100 trials; < 2 min. Window radii are
// fractions of the domain side. Wider windows (0.05 / 0.15 / 0.4) leave so
// few independent patches that the true fields themselves correlate in
// sample, which caps any unmixing; that rate is reported alongside.
struct RecoveryRate {
  int successes = 0;
  double worst_min = 1.0;
  double worst_truth_corr = 0.0;
};

RecoveryRate recovery_rate(const std::vector<double>& radii) {
  RecoveryRate out;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    const auto pts = fixtures::uniform_points(rng, 500);
    const Eigen::MatrixXd z = fixtures::moving_average_fields(rng, pts, radii);
    Eigen::MatrixXd a;
    do {
      a = fixtures::normal_matrix(rng, 3, 3);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
      if (svd.singularValues()(0) / svd.singularValues()(2) < 10.0) break;
    } while (true);
    const SpatialDataset ds(pts, z * a.transpose(), fixtures::names(3));
    ParameterSetting setting;
    setting.regionalization = fixtures::whole_domain();
    setting.kernel.rings = {{0.0, radii[0]}, {radii[0], radii[1]}, {radii[1], radii[2]}};
    const SbssResult r = run_sbss(ds, setting);
    const auto c = fixtures::matched_correlations(z, r.latent_scores);
    const double m = *std::min_element(c.begin(), c.end());
    out.worst_min = std::min(out.worst_min, m);
    if (m > 0.95) ++out.successes;
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = i + 1; j < 3; ++j)
        out.worst_truth_corr =
            std::max(out.worst_truth_corr, fixtures::abs_correlation(z.col(i), z.col(j)));
  }
  return out;
}

Outcome recovery() {
  const auto start = Clock::now();
  const RecoveryRate main = recovery_rate({0.01, 0.03, 0.08});
  const double t = seconds_since(start);
  const RecoveryRate wide = recovery_rate({0.05, 0.15, 0.4});
  return {main.successes >= 95 && t < 120.0,
          std::to_string(main.successes) + "/100 trials recovered, worst min |corr| " +
              fmt("%.3f", main.worst_min) + ", " + fmt("%.1f s", t) +
              " [info: radii 0.05/0.15/0.4 give " + std::to_string(wide.successes) +
              "/100; true fields correlate up to " + fmt("%.2f", wide.worst_truth_corr) +
              " in sample]"};
}

// 6. REDCAP: connected regions, optimal planted bipartition, monotone hg.
Outcome redcap() {
  std::mt19937_64 rng(6);
  int disconnected = 0, invalid = 0, increases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> size(12, 80), dim(1, 4);
    const SpatialDataset ds = fixtures::random_dataset(rng, size(rng), dim(rng));
    const VoronoiDiagram vor(ds.locations());
    const std::size_t k_max = std::min<std::size_t>(8, ds.size());
    const RegionTree tree(ds, vor, k_max);
    for (std::size_t k = 1; k <= tree.max_regions(); ++k) {
      const auto labels = tree.labels(k);
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::size_t> part;
        for (std::size_t i = 0; i < labels.size(); ++i)
          if (labels[i] == c) part.push_back(i);
        if (part.empty() || !vor.adjacency().connected(part)) ++disconnected;
      }
      const Regionalization r = tree.regionalization(k);
      if (r.regions.size() != k || !validate_regionalization(r, ds).ok()) ++invalid;
    }
    const auto& h = tree.heterogeneity();
    for (std::size_t s = 1; s < h.size(); ++s)
      if (h[s] > h[s - 1] + 1e-9 * std::max(1.0, h[0])) ++increases;
  }

  // Planted instances: the left cluster varies as +-e1, the right as +-e2,
  // each sign-balanced so both clusters are internally homogeneous. hg also
  // vanishes on any region made of two equal-sized value groups, so some
  // draws have a mixed optimum; those are not two-cluster instances for
  // this measure and are redrawn (the count is reported).
  int mismatched = 0, planted = 0, redrawn = 0;
  double worst = 0.0;
  while (planted < 30) {
    std::uniform_int_distribution<std::size_t> half(1, 3);
    const std::size_t left = 2 * half(rng), right = 2 * half(rng);
    std::uniform_real_distribution<double> ux(0.0, 0.4), uy(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<Point> pts;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(left + right), 2);
    for (std::size_t i = 0; i < left + right; ++i) {
      const bool l = i < left;
      const double sign = i % 2 == 0 ? 1.0 : -1.0;
      pts.push_back({ux(rng) + (l ? 0.0 : 0.6), uy(rng)});
      x(static_cast<Eigen::Index>(i), 0) = (l ? sign : 0.0) + noise(rng);
      x(static_cast<Eigen::Index>(i), 1) = (l ? 0.0 : sign) + noise(rng);
    }
    const SpatialDataset ds(pts, x, fixtures::names(2));
    const VoronoiDiagram vor(ds.locations());
    const Eigen::MatrixXd sx = standardized(ds.variables());
    const double oracle = fixtures::exhaustive_two_region_optimum(sx, vor.adjacency(), &vor);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < left + right; ++i) (i < left ? a : b).push_back(i);
    const double split = fixtures::brute_heterogeneity(sx, a) + fixtures::brute_heterogeneity(sx, b);
    if (split > oracle + 1e-12 || !vor.adjacency().connected(a) || !vor.adjacency().connected(b)) {
      ++redrawn;
      continue;
    }
    ++planted;
    const RegionTree tree(ds, vor, 2);
    const double got = tree.heterogeneity()[1];
    const double rel = std::abs(got - oracle) / std::max(1.0, oracle);
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++mismatched;
    if (got > tree.heterogeneity()[0]) ++increases;
  }
  return {disconnected == 0 && invalid == 0 && increases == 0 && mismatched == 0,
          std::to_string(disconnected) + " disconnected, " + std::to_string(invalid) +
              " invalid regionalizations, " + std::to_string(increases) +
              " hg increases, " + std::to_string(mismatched) +
              "/30 planted instances off the exhaustive optimum (max rel " +
              fmt("%.1e", worst) + ", " + std::to_string(redrawn) + " draws with a mixed optimum redrawn)"};
}

// 7. White-noise sill 1 +- 0.15 per bin; constant variable gives zeros;
// two-point hand computation gives 2.
Outcome variogram() {
  std::mt19937_64 rng(7);
  const auto pts = fixtures::uniform_points(rng, 500);
  Eigen::MatrixXd x(500, 2);
  x.col(0) = fixtures::normal_matrix(rng, 500, 1).col(0);
  x.col(1).setConstant(4.2);
  const SpatialDataset ds(pts, x, {"noise", "constant"});
  const DistanceMatrix d = pairwise_distances(ds);
  const VariogramSet v = variograms(ds, d, 15, 0.5 * d.max());
  double worst_sill = 0.0, worst_const = 0.0;
  for (std::size_t b = 0; b < 15; ++b) {
    if (v.per_variable[0][b]) worst_sill = std::max(worst_sill, std::abs(*v.per_variable[0][b] - 1.0));
    if (v.per_variable[1][b]) worst_const = std::max(worst_const, std::abs(*v.per_variable[1][b]));
  }
  const SpatialDataset two({{0.0, 0.0}, {1.0, 0.0}}, Eigen::MatrixXd{{0.0}, {2.0}}, {"z"});
  const VariogramSet hand = variograms(two, 1, 1.0, {.semivariance = true, .standardize = false});
  const double g = hand.per_variable[0][0].value_or(-1.0);
  return {worst_sill <= 0.15 && worst_const == 0.0 && g == 2.0,
          "max |gamma - 1| = " + fmt("%.3f", worst_sill) + ", constant max " +
              fmt("%.1e", worst_const) + ", two-point gamma " + fmt("%g", g)};
}

// 8. Split/merge area round trip (1e-9 relative) on 100 random convex
// regions; grid partitions validate.
Outcome geometry() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> count(3, 16);
    std::vector<double> angles(static_cast<std::size_t>(count(rng)));
    for (double& a : angles) a = 2.0 * std::numbers::pi * u(rng);
    std::sort(angles.begin(), angles.end());
    const Point c{10.0 * u(rng), 10.0 * u(rng)};
    const double rad = 0.5 + 5.0 * u(rng);
    std::vector<Point> ring;
    for (double a : angles) ring.push_back({c.x + rad * std::cos(a), c.y + rad * std::sin(a)});
    std::unique_ptr<Region> region;
    try {
      region = std::make_unique<Region>(7, ring);
    } catch (const Error&) {
      --trial;  // near-degenerate draw (e.g. all angles in one arc sliver)
      continue;
    }
    // Cut through a random interior point in a random direction.
    Point inside{0.0, 0.0};
    std::vector<double> w(region->boundary().size());
    double wsum = 0.0;
    for (double& x : w) wsum += (x = u(rng) + 0.1);
    for (std::size_t k = 0; k < w.size(); ++k)
      inside = inside + (w[k] / wsum) * region->boundary()[k];
    const double theta = std::numbers::pi * u(rng);
    const Point dir{std::cos(theta), std::sin(theta)};
    const std::vector<Point> cut = {inside - (3.0 * rad) * dir, inside + (3.0 * rad) * dir};
    try {
      const auto [a, b] = split_region(*region, cut, 8);
      const double total = region->area();
      const Region merged = merge_regions(a, b);
      const double e1 = std::abs(a.area() + b.area() - total) / total;
      const double e2 = std::abs(merged.area() - total) / total;
      worst = std::max({worst, e1, e2});
      if (e1 > 1e-9 || e2 > 1e-9 || merged.id() != 7) ++failures;
    } catch (const Error& e) {
      ++failures;
    }
  }
  int invalid_grids = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const SpatialDataset ds = fixtures::random_dataset(rng, 150, 1, 1000.0);
    for (std::size_t side = 1; side <= 6; ++side) {
      if (!validate_regionalization(grid_partition(ds, side), ds).ok()) ++invalid_grids;
    }
  }
  return {failures == 0 && invalid_grids == 0,
          std::to_string(failures) + " failed round trips (max rel area error " +
              fmt("%.1e", worst) + "), " + std::to_string(invalid_grids) + " invalid grids"};
}

// 9. Full guidance at 2108 x 18 in under 5 minutes.
Outcome scale_envelope() {
  std::mt19937_64 rng(9);
  const auto pts = fixtures::uniform_points(rng, 2108, 1.0e6);
  std::vector<double> radii = {5.0e4, 1.5e5};
  Eigen::MatrixXd latent(2108, 18);
  latent.leftCols(2) = fixtures::moving_average_fields(rng, pts, radii);
  latent.rightCols(16) = fixtures::normal_matrix(rng, 2108, 16);
  const Eigen::MatrixXd x = latent * fixtures::normal_matrix(rng, 18, 18).transpose();
  const SpatialDataset ds(pts, x, fixtures::names(18));
  const auto start = Clock::now();
  const GuidanceBundle bundle = compute_guidance(ds);
  const double t = seconds_since(start);
  const bool shape_ok = bundle.regionalizations.size() == 6 + 7 &&
                        bundle.kernel_suggestions.size() == 1 + 2 + 4;
  return {t < 300.0 && shape_ok,
          fmt("%.1f s", t) + " for 6 grids, 7 covariance regionalizations, " +
              std::to_string(bundle.kernel_suggestions.size()) + " kernel suggestions"};
}

// 10. Flags below ceil(0.05 n); exactly at the threshold is not flagged.
Outcome threshold_flags() {
  // 10 x 10 lattice at half-integer coordinates; regions of 5, 4, 1, 90.
  std::vector<Point> pts;
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) pts.push_back({i + 0.5, j + 0.5});
  std::mt19937_64 rng(10);
  const SpatialDataset ds(pts, fixtures::normal_matrix(rng, 100, 2), fixtures::names(2));
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(1, 0, 0, 5, 1));
  r.regions.push_back(fixtures::rectangle(2, 5, 0, 9, 1));
  r.regions.push_back(fixtures::rectangle(3, 9, 0, 10, 1));
  r.regions.push_back(fixtures::rectangle(4, 0, 1, 10, 10));
  const auto counts = region_location_counts(r, ds);
  const bool regions_ok = minimum_count(kDefaultThreshold, 100) == 5 && counts.size() == 4 &&
                          counts[0].count == 5 && !counts[0].flagged &&
                          counts[1].count == 4 && counts[1].flagged &&
                          counts[2].count == 1 && counts[2].flagged &&
                          counts[3].count == 90 && !counts[3].flagged;

  // 20 locations as 10 pairs one unit apart: mean neighbourhood size 1 for
  // ring (0.5, 1.5), exactly ceil(0.05 * 20). Stretching one pair drops
  // the mean to 0.9.
  auto pairs = [](double last_gap) {
    std::vector<Point> p;
    for (int k = 0; k < 10; ++k) {
      p.push_back({5.0 * k, 0.0});
      p.push_back({5.0 * k + (k == 9 ? last_gap : 1.0), 0.0});
    }
    return p;
  };
  const KernelConfig kernel{{{0.5, 1.5}}};
  Regionalization one;
  one.regions.push_back(fixtures::rectangle(0, -1, -1, 50, 1));
  const SpatialDataset exact(pairs(1.0), fixtures::normal_matrix(rng, 20, 1), {"z"});
  const SpatialDataset below(pairs(2.0), fixtures::normal_matrix(rng, 20, 1), {"z"});
  const auto at = kernel_location_counts(one, kernel, exact);
  const auto under = kernel_location_counts(one, kernel, below);
  const bool kernels_ok = at[0].ring_means[0] == 1.0 && !at[0].ring_flagged[0] &&
                          under[0].ring_means[0] == 0.9 && under[0].ring_flagged[0];
  return {regions_ok && kernels_ok,
          std::string("regions ") + (regions_ok ? "ok" : "wrong") + " (5 kept, 4 and 1 flagged), "
              "kernels " + (kernels_ok ? "ok" : "wrong") + " (mean 1 kept, 0.9 flagged)"};
}

// 11. CLI suggest and run are byte-identical across invocations.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("sbss_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  std::mt19937_64 rng(11);
  const SpatialDataset ds = fixtures::random_dataset(rng, 150, 3, 1000.0);
  write_text_file(root / "data.csv", dataset_to_csv(ds));
  ParameterSetting setting;
  setting.regionalization = fixtures::whole_domain(1000.0);
  setting.kernel.rings = {{0.0, 100.0}, {100.0, 250.0}};
  setting.label = "determinism";
  setting.created_at = "2024-01-01T00:00:00Z";
  write_text_file(root / "setting.json", setting_to_json(setting).dump(2));

  std::ostringstream out, err;
  auto cli = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "sbss");
    return run_cli(args, out, err);
  };
  const std::string ws = (root / "ws").string();
  int rc = cli({"ingest", (root / "data.csv").string(), "--x", "x", "--y", "y", "--workspace", ws});
  rc |= cli({"suggest", "--workspace", ws});
  const std::string first = read_text_file(root / "ws" / "guidance.json");
  rc |= cli({"suggest", "--workspace", ws});
  const std::string second = read_text_file(root / "ws" / "guidance.json");
  const std::string setting_path = (root / "setting.json").string();
  rc |= cli({"run", "--workspace", ws, "--setting", setting_path, "--out", (root / "a").string()});
  rc |= cli({"run", "--workspace", ws, "--setting", setting_path, "--out", (root / "b").string()});
  int differing = first == second ? 0 : 1;
  for (const char* f : {"W.csv", "scores.csv", "diagnostics.json"}) {
    if (read_text_file(root / "a" / f) != read_text_file(root / "b" / f)) ++differing;
  }
  fs::remove_all(root);
  return {rc == 0 && differing == 0,
          "exit status " + std::to_string(rc) + ", " + std::to_string(differing) +
              " differing files" + (err.str().empty() ? "" : " (" + err.str() + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"neighbourhood matrix matches pairwise oracle", neighbourhood_oracle},
      {"local covariance identities", lcov_identities},
      {"whitening and W Cov W^T = I", whitening},
      {"joint diagonalization exact and monotone", joint_diagonalization},
      {"recovery of planted latent fields", recovery},
      {"REDCAP connectivity, optimality, monotone hg", redcap},
      {"variogram sill, constant and hand case", variogram},
      {"split/merge round trip and grid validity", geometry},
      {"guidance at 2108 x 18 within 5 minutes", scale_envelope},
      {"threshold flagging at 5%", threshold_flags},
      {"CLI suggest/run determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first
              << " -- " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
