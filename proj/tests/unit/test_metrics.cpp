#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "sbss/error.hpp"
#include "sbss/geometry.hpp"
#include "sbss/metrics.hpp"

using namespace sbss;

namespace {

SpatialDataset one_variable(std::vector<Point> pts, std::vector<double> v) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = v[i];
  return SpatialDataset(std::move(pts), x, {"v"});
}

}  // namespace

TEST_CASE("minimum count") {
  CHECK(minimum_count(0.05, 100) == 5);
  CHECK(minimum_count(0.05, 101) == 6);
  CHECK(minimum_count(0.07, 100) == 7);  // 7.000000000000001 is still 7
  CHECK(minimum_count(0.05, 20) == 1);
}

TEST_CASE("region counts and flags") {
  std::mt19937_64 rng(51);
  std::vector<Point> pts;
  for (int i = 0; i < 96; ++i) pts.push_back({0.1 + 0.3 * (i % 12) / 12.0, 0.05 + 0.9 * (i / 12) / 8.0});
  for (int i = 0; i < 4; ++i) pts.push_back({0.8 + 0.05 * i, 0.5 + 0.01 * i});
  const SpatialDataset ds(pts, fixtures::normal_matrix(rng, 100, 1), {"v"});
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(0, -1, -1, 0.6, 2));
  r.regions.push_back(fixtures::rectangle(1, 0.6, -1, 2, 2));
  const auto counts = region_location_counts(r, ds);
  REQUIRE(counts.size() == 2);
  CHECK(counts[0].count == 96);
  CHECK_FALSE(counts[0].flagged);
  CHECK(counts[1].count == 4);
  CHECK(counts[1].flagged);
  const auto single = region_location_counts(fixtures::whole_domain(), ds);
  CHECK(single[0].count == 100);
  CHECK_FALSE(single[0].flagged);
}

TEST_CASE("kernel counts") {
  const auto ds = one_variable({{0, 0}, {1, 0}, {2, 0}}, {1, 2, 3});
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(0, -1, -1, 3, 1));
  const auto kc = kernel_location_counts(r, {{{0.5, 1.5}, {10, 20}}}, ds);
  REQUIRE(kc.size() == 1);
  CHECK(kc[0].region_size == 3);
  CHECK(kc[0].ring_means[0] == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(kc[0].ring_flagged[0]);
  CHECK(kc[0].ring_means[1] == 0.0);
  CHECK(kc[0].ring_flagged[1]);
  CHECK(kc[0].config_mean == doctest::Approx(4.0 / 3.0));

  const auto both = kernel_location_counts(r, {{{0.5, 1.5}, {1.6, 2.5}}}, ds);
  CHECK(both[0].config_mean == doctest::Approx(both[0].ring_means[0] + both[0].ring_means[1]));
}

TEST_CASE("covariance difference") {
  // Global variance 5; each half has variance 1.
  const auto ds = one_variable({{0, 0}, {0.1, 0.5}, {0.9, 0}, {1, 0.5}}, {-3, -1, 1, 3});
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(0, -1, -1, 0.5, 2));
  r.regions.push_back(fixtures::rectangle(1, 0.5, -1, 2, 2));
  const auto d = region_cov_difference(r, ds);
  REQUIRE(d[0].has_value());
  CHECK(*d[0] == doctest::Approx(4.0));
  const auto whole = region_cov_difference(fixtures::whole_domain(), ds);
  CHECK(*whole[0] == doctest::Approx(0.0));

  const auto ds2 = one_variable({{0, 0}, {0.1, 0.5}, {0.2, 0.2}, {0.8, 0}, {0.9, 0.5}, {1, 0.2}},
                                {-1, 1, 0, -2, 4, -2});
  // Global variance: mean 0, squares 1+1+0+4+16+4 = 26 / 6; left variance 2/3.
  const auto d2 = region_cov_difference(r, ds2);
  CHECK(*d2[0] == doctest::Approx(26.0 / 6.0 - 2.0 / 3.0));
}

TEST_CASE("covariance difference of p = 1 example") {
  // Variance 4 overall, 1 inside the region.
  const auto ds = one_variable({{0, 0}, {0.1, 0.1}, {0.9, 0.9}, {1, 1}},
                               {-std::sqrt(7.0), std::sqrt(7.0), -1, 1});
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(0, -1, -1, 0.5, 2));
  r.regions.push_back(fixtures::rectangle(1, 0.5, -1, 2, 2));
  CHECK(*region_cov_difference(r, ds)[1] == doctest::Approx(3.0));
}

TEST_CASE("singleton regions have no covariance difference") {
  const auto ds = one_variable({{0, 0}, {0.5, 0.5}, {1, 1}}, {1, 2, 3});
  Regionalization r;
  r.regions.push_back(fixtures::rectangle(0, -1, -1, 0.25, 2));
  r.regions.push_back(fixtures::rectangle(1, 0.25, -1, 2, 2));
  const auto d = region_cov_difference(r, ds);
  CHECK_FALSE(d[0].has_value());
  CHECK(d[1].has_value());
}

TEST_CASE("metrics follow their regions under reordering") {
  std::mt19937_64 rng(52);
  const auto ds = fixtures::random_dataset(rng, 80, 2);
  const auto r = grid_partition(ds, 3);
  Regionalization rev;
  rev.regions.assign(r.regions.rbegin(), r.regions.rend());
  const KernelConfig kernel{{{0, 0.2}}};
  const auto a = setting_metrics(ds, {r, kernel}, 0.05, true);
  const auto b = setting_metrics(ds, {rev, kernel}, 0.05, true);
  const std::size_t m = r.regions.size();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = m - 1 - k;
    CHECK(a.regions[k].id == b.regions[j].id);
    CHECK(a.regions[k].count == b.regions[j].count);
    CHECK(*a.cov_diff[k] == doctest::Approx(*b.cov_diff[j]));
    CHECK(a.kernels[k].ring_means[0] == doctest::Approx(b.kernels[j].ring_means[0]));
    CHECK(*(*a.eigenvalue_difference)[k][0] == doctest::Approx(*(*b.eigenvalue_difference)[j][0]));
  }
  CHECK_FALSE(setting_metrics(ds, {r, kernel}).eigenvalue_difference.has_value());
}

TEST_CASE("setting metrics validate input") {
  std::mt19937_64 rng(53);
  const auto ds = fixtures::random_dataset(rng, 20, 2);
  const ParameterSetting s{fixtures::whole_domain(), {{{0, 0.5}, {0.4, 0.8}}}};
  CHECK_THROWS_AS(setting_metrics(ds, s), Error);
  const ParameterSetting ok{fixtures::whole_domain(), {{{0, 0.5}}}};
  CHECK_THROWS_AS(setting_metrics(ds, ok, 0.0), Error);
  CHECK_THROWS_AS(setting_metrics(ds, ok, 1.0), Error);
}

TEST_CASE("kernel suggestions halve recursively") {
  const auto d0 = kernel_suggestions(100, 0);
  CHECK(d0 == std::vector<KernelRing>{{0, 100}});
  const auto d1 = kernel_suggestions(100, 1);
  CHECK(d1 == std::vector<KernelRing>{{0, 100}, {0, 50}, {50, 100}});
  const auto d2 = kernel_suggestions(100, 2);
  REQUIRE(d2.size() == 7);
  CHECK(d2[3] == KernelRing{0, 25});
  CHECK(d2[6] == KernelRing{75, 100});
  // Each level tiles (0, R] with touching, non-overlapping rings.
  const auto d4 = kernel_suggestions(7.3, 4);
  std::size_t at = 0;
  for (std::size_t level = 0; level <= 4; ++level) {
    const std::size_t count = std::size_t{1} << level;
    CHECK(d4[at].inner == 0.0);
    CHECK(d4[at + count - 1].outer == 7.3);
    for (std::size_t k = at + 1; k < at + count; ++k) CHECK(d4[k].inner == d4[k - 1].outer);
    at += count;
  }
  CHECK(at == d4.size());
}

TEST_CASE("quantiles and default radius") {
  const std::vector<double> s{1, 2, 3, 4};
  CHECK(sorted_quantile(s, 0.0) == 1.0);
  CHECK(sorted_quantile(s, 1.0) == 4.0);
  CHECK(sorted_quantile(s, 0.5) == doctest::Approx(2.5));
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  // distances 1,1,1,1,sqrt2,sqrt2 -> 25th percentile 1
  CHECK(default_max_radius(DistanceMatrix(pts)) == doctest::Approx(1.0));
}

TEST_CASE("distance density") {
  const auto two = distance_density(one_variable({{0, 0}, {3, 4}}, {1, 2}), 4);
  CHECK(two.counts == std::vector<std::size_t>{0, 0, 0, 1});
  CHECK(two.edges.back() == 5.0);

  const auto sq = distance_density(one_variable({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {1, 2, 3, 4}), 10);
  std::size_t total = 0;
  for (auto c : sq.counts) total += c;
  CHECK(total == 6);
  CHECK(sq.counts.back() == 2);  // sqrt 2
  CHECK(sq.counts[7] == 4);      // 1 / (sqrt2 / 10) = 7.07

  std::mt19937_64 rng(54);
  const auto ds = fixtures::random_dataset(rng, 50, 1);
  total = 0;
  const auto hist = distance_density(ds, 13);
  for (auto c : hist.counts) total += c;
  CHECK(total == 50 * 49 / 2);
}

TEST_CASE("sextiles") {
  std::vector<double> v;
  for (int i = 1; i <= 12; ++i) v.push_back(i);
  const auto b = sextile_boundaries(v);
  REQUIRE(b.size() == 5);
  CHECK(b[0] == doctest::Approx(1 + 11.0 / 6.0));
  CHECK(b[2] == doctest::Approx(6.5));
  CHECK(b[4] == doctest::Approx(1 + 55.0 / 6.0));
  CHECK(sextile_index(1, b) == 1);
  CHECK(sextile_index(12, b) == 6);
  CHECK(sextile_index(6.5, b) == 3);
  const auto flat = sextile_boundaries(std::vector<double>(9, 2.0));
  CHECK(sextile_index(2.0, flat) == 1);
}

TEST_CASE("variable grid summary") {
  std::vector<Point> pts;
  std::vector<double> v;
  for (int i = 0; i < 12; ++i) {
    pts.push_back({(i % 4) + 0.5, (i / 4) + 0.5});
    v.push_back(i + 1);
  }
  pts.push_back({0, 0});
  pts.push_back({4, 3});
  v.push_back(1);
  v.push_back(12);
  const auto ds = one_variable(pts, v);
  const auto cells = variable_grid_summary(ds, 0, 3);
  std::size_t total = 0;
  for (const auto& c : cells) {
    total += c.count;
    CHECK(c.sextile >= 1);
    CHECK(c.sextile <= 6);
  }
  CHECK(total == ds.size());

  const auto same = variable_grid_summary(one_variable(pts, std::vector<double>(14, 5.0)), 0, 3);
  for (const auto& c : same) CHECK(c.sextile == same.front().sextile);
}
