#include <doctest.h>

#include "fixtures.hpp"
#include "sbss/covariance.hpp"
#include "sbss/error.hpp"
#include "sbss/geometry.hpp"

using namespace sbss;

namespace {

SpatialDataset line_dataset(const Eigen::MatrixXd& x) {
  std::vector<Point> pts;
  for (Eigen::Index i = 0; i < x.rows(); ++i) pts.push_back({static_cast<double>(i), 0.1 * (i % 2)});
  return SpatialDataset(pts, x, fixtures::names(static_cast<std::size_t>(x.cols())));
}

}  // namespace

TEST_CASE("neighbourhood of three collinear points") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}};
  const auto k = neighbourhood_matrix(pts, {0.5, 1.5});
  NeighbourhoodMatrix::Storage expect(3, 3);
  expect << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(k.values() == expect);
  CHECK(k.pair_count() == 4);
  CHECK(mean_neighbourhood_size(k) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("ring out of range gives the zero matrix") {
  const std::vector<Point> pts{{0, 0}, {1, 2}, {3, 1}, {2, 2}};
  const auto k = neighbourhood_matrix(pts, {10, 20});
  CHECK(k.pair_count() == 0);
  CHECK(mean_neighbourhood_size(k) == 0.0);
}

TEST_CASE("self pairs stay excluded for inner radius zero") {
  const std::vector<Point> pts{{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0.05}};
  const auto k = neighbourhood_matrix(pts, {0, 100});
  for (std::size_t i = 0; i < 4; ++i) CHECK_FALSE(k(i, i));
  CHECK(mean_neighbourhood_size(k) == doctest::Approx(3.0));
}

TEST_CASE("neighbourhood equals the brute-force oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = fixtures::uniform_points(rng, 20);
    const double a = u(rng) * 0.5, b = a + u(rng) * 0.7;
    const auto k = neighbourhood_matrix(pts, {a, b});
    const auto oracle = fixtures::brute_neighbourhood(pts, a, b);
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) CHECK(int(k(i, j)) == oracle[i][j]);
    CHECK(neighbourhood_matrix(pts, {a, b}).values() == k.values());
  }
}

TEST_CASE("kernel union adds disjoint rings") {
  std::mt19937_64 rng(12);
  const auto pts = fixtures::uniform_points(rng, 30);
  const DistanceMatrix d(pts);
  const auto members = fixtures::all_indices(30);
  const KernelConfig kc{{{0, 0.2}, {0.3, 0.5}}};
  const auto both = neighbourhood_matrix(d, members, kc);
  const auto k1 = neighbourhood_matrix(d, members, kc.rings[0]);
  const auto k2 = neighbourhood_matrix(d, members, kc.rings[1]);
  CHECK(both.pair_count() == k1.pair_count() + k2.pair_count());
  CHECK(mean_neighbourhood_size(both) ==
        doctest::Approx(mean_neighbourhood_size(k1) + mean_neighbourhood_size(k2)));
}

TEST_CASE("region covariance") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 6, 5;
  const auto ds = line_dataset(x);
  const auto all = fixtures::all_indices(3);
  const auto c = region_covariance(ds, all);
  CHECK(c.flavor == CovFlavor::region);
  // mean 3; deviations -2, -1, 3 -> (4 + 1 + 9) / 3
  CHECK(c.values(0, 0) == doctest::Approx(14.0 / 3.0));
  CHECK(c.values(1, 1) == 0.0);
  CHECK(c.values(0, 1) == 0.0);
  CHECK((c.values - global_covariance(ds).values).norm() < 1e-14);
  const std::vector<std::size_t> one{0};
  CHECK_THROWS_AS(region_covariance(ds, one), Error);
}

TEST_CASE("global covariance uses divisor n") {
  std::mt19937_64 rng(13);
  const auto ds = fixtures::random_dataset(rng, 50, 3);
  CHECK((global_covariance(ds).values - fixtures::brute_covariance(ds.variables())).norm() <
        1e-12);
}

TEST_CASE("local covariance of two symmetric points") {
  Eigen::MatrixXd x(2, 1);
  x << 3, -3;
  const auto ds = line_dataset(x);
  const auto lc = local_covariance(ds, fixtures::all_indices(2), KernelRing{0.5, 1.5});
  CHECK(lc.flavor == CovFlavor::local);
  CHECK(lc.values(0, 0) == doctest::Approx(-9.0));
  const auto pairs = local_covariance(ds, fixtures::all_indices(2), KernelRing{0.5, 1.5},
                                      LocalNormalization::pairs);
  CHECK(pairs.values(0, 0) == doctest::Approx(-9.0));
  const auto none = local_covariance(ds, fixtures::all_indices(2), KernelRing{5, 6});
  CHECK(none.values.norm() == 0.0);
}

TEST_CASE("local covariance equals the double loop and the full-ring identity") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = fixtures::random_dataset(rng, 15, 2);
    const std::vector<Point> pts(ds.locations().begin(), ds.locations().end());
    const auto all = fixtures::all_indices(15);
    const auto lc = local_covariance(ds, all, KernelRing{0.1, 0.6});
    const auto oracle = fixtures::brute_local_covariance(
        ds.variables(), fixtures::brute_neighbourhood(pts, 0.1, 0.6));
    CHECK((lc.values - oracle).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lc.values == lc.values.transpose());
    const auto full = local_covariance(ds, all, KernelRing{0, 10});
    CHECK((full.values + region_covariance(ds, all).values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("local covariance stays within the region") {
  std::mt19937_64 rng(15);
  const auto ds = fixtures::random_dataset(rng, 20, 2);
  const std::vector<std::size_t> sub{1, 4, 7, 9, 12, 18};
  Eigen::MatrixXd xs(6, 2);
  std::vector<Point> ps;
  for (std::size_t k = 0; k < sub.size(); ++k) {
    xs.row(static_cast<Eigen::Index>(k)) = ds.variables().row(static_cast<Eigen::Index>(sub[k]));
    ps.push_back(ds.locations()[sub[k]]);
  }
  const auto lc = local_covariance(ds, sub, KernelRing{0, 0.8});
  const auto oracle = fixtures::brute_local_covariance(xs, fixtures::brute_neighbourhood(ps, 0, 0.8));
  CHECK((lc.values - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("centered rows") {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 6;
  const std::vector<std::size_t> m{0, 2};
  const auto c = centered_rows(x, m);
  CHECK(c(0, 0) == doctest::Approx(-2.5));
  CHECK(c(1, 0) == doctest::Approx(2.5));
}
