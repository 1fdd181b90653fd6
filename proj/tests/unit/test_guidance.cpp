#include <doctest.h>

#include "fixtures.hpp"
#include "sbss/error.hpp"
#include "sbss/geometry.hpp"
#include "sbss/guidance.hpp"

using namespace sbss;

namespace {

std::string field_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() + "@" + e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(GuidanceParams{}, 100));
  GuidanceParams p;
  p.threshold = 0.0;
  CHECK(field_of([&] { validate(p, 100); }) == "invalid_params@threshold");
  p = {};
  p.k_max = 1;
  CHECK(field_of([&] { validate(p, 100); }) == "invalid_params@k_max");
  p = {};
  p.k_min = 5;
  p.k_max = 3;
  CHECK(field_of([&] { validate(p, 100); }) == "invalid_params@k_max");
  p = {};
  p.k_max = 101;
  CHECK_THROWS_AS(validate(p, 100), Error);
  p = {};
  p.grid_max = 0;
  CHECK(field_of([&] { validate(p, 100); }) == "invalid_params@grid_max");
  p = {};
  p.max_radius = -1.0;
  CHECK(field_of([&] { validate(p, 100); }) == "invalid_params@max_radius");
}

TEST_CASE("default bundle") {
  std::mt19937_64 rng(71);
  const auto ds = fixtures::random_dataset(rng, 500, 3);
  const auto b = compute_guidance(ds);
  std::size_t grids = 0, covs = 0;
  for (const auto& s : b.regionalizations) {
    (s.source == "grid" ? grids : covs) += 1;
    CHECK(validate_regionalization(s.regionalization, ds).ok());
    CHECK(s.metrics.size() == s.regionalization.regions.size());
    std::size_t total = 0;
    for (const auto& m : s.metrics) total += m.count;
    CHECK(total == 500);
  }
  CHECK(grids == 6);
  CHECK(covs == 7);
  REQUIRE(b.kernel_suggestions.size() == 7);
  REQUIRE(b.params.max_radius.has_value());
  CHECK(*b.params.max_radius == doctest::Approx(default_max_radius(pairwise_distances(ds))));
  CHECK(b.kernel_suggestions[0].ring.outer == *b.params.max_radius);
  for (const auto& k : b.kernel_suggestions) {
    REQUIRE(k.mean_counts.size() == b.regionalizations.size());
    for (std::size_t r = 0; r < k.mean_counts.size(); ++r)
      CHECK(k.mean_counts[r].size() == b.regionalizations[r].regionalization.regions.size());
  }
  REQUIRE(b.params.max_lag.has_value());
  CHECK(*b.params.max_lag == doctest::Approx(pairwise_distances(ds).max() / 2));
  CHECK(b.variograms.per_variable.size() == 3);
  CHECK(b.variograms.pair_counts.size() == 15);
}

TEST_CASE("narrow ranges") {
  std::mt19937_64 rng(72);
  const auto ds = fixtures::random_dataset(rng, 100, 2);
  GuidanceParams p;
  p.k_min = 2;
  p.k_max = 2;
  p.grid_max = 2;
  p.kernel_depth = 0;
  p.max_radius = 0.3;
  const auto b = compute_guidance(ds, p);
  CHECK(b.regionalizations.size() == 3);
  CHECK(b.regionalizations.back().source == "covariance");
  CHECK(b.regionalizations.back().regionalization.regions.size() == 2);
  REQUIRE(b.kernel_suggestions.size() == 1);
  CHECK(b.kernel_suggestions[0].ring == KernelRing{0, 0.3});
}

TEST_CASE("guidance is deterministic") {
  std::mt19937_64 rng(73);
  const auto ds = fixtures::random_dataset(rng, 200, 2);
  const auto a = compute_guidance(ds);
  const auto b = compute_guidance(ds);
  REQUIRE(a.regionalizations.size() == b.regionalizations.size());
  for (std::size_t r = 0; r < a.regionalizations.size(); ++r) {
    const auto& ra = a.regionalizations[r].regionalization.regions;
    const auto& rb = b.regionalizations[r].regionalization.regions;
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) CHECK(ra[k].boundary() == rb[k].boundary());
  }
}
