#include "sbss/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "sbss/error.hpp"

namespace sbss {

SpatialDataset::SpatialDataset(std::vector<Point> locations, Eigen::MatrixXd variables,
                               std::vector<std::string> variable_names,
                               std::string crs_note)
    : locations_(std::move(locations)),
      variables_(std::move(variables)),
      variable_names_(std::move(variable_names)),
      crs_note_(std::move(crs_note)) {
  const std::size_t n = locations_.size();
  if (n < 2) throw_validation("too_few_locations", "dataset needs at least 2 locations");
  if (variables_.cols() < 1) throw_validation("no_variables", "dataset needs at least 1 variable");
  if (static_cast<std::size_t>(variables_.rows()) != n) {
    throw_validation("shape_mismatch", "variable rows do not match location count");
  }
  if (variable_names_.size() != static_cast<std::size_t>(variables_.cols())) {
    throw_validation("shape_mismatch", "variable names do not match variable columns");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(locations_[i].x) || !std::isfinite(locations_[i].y)) {
      throw_validation("missing_values", "non-finite coordinate in row " + std::to_string(i + 1));
    }
  }
  if (!variables_.allFinite()) {
    std::ostringstream rows;
    bool first = true;
    for (Eigen::Index i = 0; i < variables_.rows(); ++i) {
      if (!variables_.row(i).allFinite()) {
        rows << (first ? "" : ", ") << (i + 1);
        first = false;
      }
    }
    throw_validation("missing_values", "missing or non-finite values in rows " + rows.str());
  }

  // Pairwise distinct locations, checked on an x-sorted sweep.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return locations_[a].x < locations_[b].x;
  });
  std::set<std::pair<std::size_t, std::size_t>> duplicates;
  for (std::size_t a = 0; a < n; ++a) {
    const Point pa = locations_[order[a]];
    for (std::size_t b = a + 1; b < n; ++b) {
      const Point pb = locations_[order[b]];
      if (pb.x - pa.x > kGeometryEpsilon) break;
      if (nearly_equal(pa, pb)) {
        duplicates.insert(std::minmax(order[a], order[b]));
      }
    }
  }
  if (!duplicates.empty()) {
    std::ostringstream msg;
    msg << "duplicate coordinates in rows";
    for (const auto& [a, b] : duplicates) msg << ' ' << (a + 1) << '/' << (b + 1);
    throw_validation("duplicate_coordinates", msg.str());
  }
}

Region::Region(RegionId id, std::span<const Point> boundary)
    : id_(id), boundary_(normalized_ring(boundary)) {
  if (!is_simple(boundary_)) {
    throw_validation("invalid_polygon",
                     "region " + std::to_string(id) + " is not a simple polygon with positive area");
  }
  bounds_ = bounding_box(boundary_);
}

Containment Region::locate(Point p) const {
  if (!bounds_.contains(p, kGeometryEpsilon)) return Containment::outside;
  return sbss::locate(p, boundary_);
}

ValidityReport validate_kernel(const KernelConfig& config) {
  ValidityReport report;
  if (config.rings.empty()) report.violations.push_back("kernel needs at least one ring");
  for (std::size_t i = 0; i < config.rings.size(); ++i) {
    const KernelRing& ring = config.rings[i];
    if (!std::isfinite(ring.inner) || !std::isfinite(ring.outer)) {
      report.violations.push_back("ring " + std::to_string(i) + ": radii must be finite");
    } else if (ring.inner < 0.0) {
      report.violations.push_back("ring " + std::to_string(i) + ": inner >= 0 required");
    } else if (!(ring.inner < ring.outer)) {
      report.violations.push_back("ring " + std::to_string(i) + ": inner < outer required");
    }
  }
  std::vector<std::size_t> order(config.rings.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = config.rings[a];
    const auto& rb = config.rings[b];
    return ra.inner != rb.inner ? ra.inner < rb.inner : a < b;
  });
  // Overlap is checked on all pairs so that nested rings are also caught.
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const KernelRing& lo = config.rings[order[a]];
      const KernelRing& hi = config.rings[order[b]];
      if (hi.inner < lo.outer) {
        const auto [i, j] = std::minmax(order[a], order[b]);
        report.violations.push_back("rings " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
      }
    }
  }
  return report;
}

namespace {

struct Assignment {
  std::vector<std::size_t> region;  // npos when unassigned
  RegionalizationReport report;
};

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

Assignment assign(const Regionalization& r, const SpatialDataset& ds) {
  Assignment out;
  out.region.assign(ds.size(), kUnassigned);
  auto& report = out.report;

  std::set<RegionId> seen;
  for (std::size_t k = 0; k < r.regions.size(); ++k) {
    if (!seen.insert(r.regions[k].id()).second) {
      report.invalid_regions.push_back(k);
      report.violations.push_back("duplicate region id " + std::to_string(r.regions[k].id()));
    }
  }
  if (r.regions.empty()) report.violations.push_back("regionalization has no regions");

  const auto locations = ds.locations();
  for (std::size_t i = 0; i < locations.size(); ++i) {
    std::size_t inside = 0;
    std::size_t touching = 0;
    std::size_t best = kUnassigned;
    for (std::size_t k = 0; k < r.regions.size(); ++k) {
      const Containment c = r.regions[k].locate(locations[i]);
      if (c == Containment::outside) continue;
      (c == Containment::inside ? inside : touching) += 1;
      if (best == kUnassigned || r.regions[k].id() < r.regions[best].id()) best = k;
    }
    if (best == kUnassigned) {
      report.unassigned.push_back(i);
    } else if (inside >= 2 || (inside == 1 && touching >= 1)) {
      report.multiply_assigned.push_back(i);
    } else {
      out.region[i] = best;
    }
  }

  auto list = [](const std::vector<std::size_t>& v) {
    std::ostringstream s;
    for (std::size_t k = 0; k < v.size() && k < 20; ++k) s << (k ? ", " : "") << v[k];
    if (v.size() > 20) s << ", ...";
    return s.str();
  };
  if (!report.unassigned.empty()) {
    report.violations.push_back("locations outside every region: " + list(report.unassigned));
  }
  if (!report.multiply_assigned.empty()) {
    report.violations.push_back("locations in overlapping regions: " +
                                list(report.multiply_assigned));
  }
  return out;
}

}  // namespace

RegionalizationReport validate_regionalization(const Regionalization& r,
                                               const SpatialDataset& ds) {
  return assign(r, ds).report;
}

std::vector<std::size_t> assign_location_indices(const Regionalization& r,
                                                 const SpatialDataset& ds) {
  Assignment a = assign(r, ds);
  if (!a.report.ok()) {
    throw_validation("invalid_regionalization", a.report.violations.front());
  }
  return std::move(a.region);
}

std::vector<RegionId> assign_locations(const Regionalization& r, const SpatialDataset& ds) {
  const auto idx = assign_location_indices(r, ds);
  std::vector<RegionId> ids(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) ids[i] = r.regions[idx[i]].id();
  return ids;
}

std::vector<std::vector<std::size_t>> members_by_region(const Regionalization& r,
                                                        const SpatialDataset& ds) {
  const auto idx = assign_location_indices(r, ds);
  std::vector<std::vector<std::size_t>> members(r.regions.size());
  for (std::size_t i = 0; i < idx.size(); ++i) members[idx[i]].push_back(i);
  return members;
}

}  // namespace sbss
