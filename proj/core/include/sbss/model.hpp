#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "sbss/polygon.hpp"

namespace sbss {

/// A multivariate point dataset on the plane: n locations (meters) and an
/// n x p matrix of variable values. Immutable after construction.
class SpatialDataset {
 public:
  /// Throws Error(validation) when n < 2, p < 1, names and columns disagree,
  /// a value is not finite, or two locations coincide within
  /// kGeometryEpsilon.
  SpatialDataset(std::vector<Point> locations, Eigen::MatrixXd variables,
                 std::vector<std::string> variable_names, std::string crs_note = {});

  std::size_t size() const { return locations_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(variables_.cols()); }

  std::span<const Point> locations() const { return locations_; }
  const Eigen::MatrixXd& variables() const { return variables_; }
  const std::vector<std::string>& variable_names() const { return variable_names_; }
  const std::string& crs_note() const { return crs_note_; }

 private:
  std::vector<Point> locations_;
  Eigen::MatrixXd variables_;
  std::vector<std::string> variable_names_;
  std::string crs_note_;
};

/// Annulus of location pairs with inner <= distance <= outer.
struct KernelRing {
  double inner = 0.0;
  double outer = 0.0;

  bool contains(double d) const { return inner <= d && d <= outer; }
  friend bool operator==(const KernelRing&, const KernelRing&) = default;
};

struct KernelConfig {
  std::vector<KernelRing> rings;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

using RegionId = std::int64_t;

/// A simple polygon without holes, stored counterclockwise.
class Region {
 public:
  /// Normalizes orientation; throws Error(validation, "invalid_polygon") for
  /// rings that are not simple or have no area.
  Region(RegionId id, std::span<const Point> boundary);

  RegionId id() const { return id_; }
  const Ring& boundary() const { return boundary_; }
  const BoundingBox& bounds() const { return bounds_; }
  double area() const { return signed_area(boundary_); }
  Containment locate(Point p) const;

 private:
  RegionId id_;
  Ring boundary_;
  BoundingBox bounds_;
};

struct Regionalization {
  std::vector<Region> regions;
};

struct ParameterSetting {
  Regionalization regionalization;
  KernelConfig kernel;
  std::string label;
  std::string created_at;  // ISO-8601
  /// Unknown top-level fields from the source document, kept for round trips.
  nlohmann::json extra = nlohmann::json::object();
};

struct ValidityReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

struct RegionalizationReport {
  std::vector<std::string> violations;
  std::vector<std::size_t> unassigned;          // location indices
  std::vector<std::size_t> multiply_assigned;   // location indices
  std::vector<std::size_t> invalid_regions;     // region indices

  bool ok() const { return violations.empty(); }
};

ValidityReport validate_kernel(const KernelConfig& config);

/// A location on the boundary of several regions goes to the smallest id;
/// a location strictly inside one region and touching or inside another is
/// reported as multiply assigned.
RegionalizationReport validate_regionalization(const Regionalization& r,
                                               const SpatialDataset& ds);

/// Region index (into r.regions) for every location. Throws
/// Error(validation, "invalid_regionalization") when validation fails.
std::vector<std::size_t> assign_location_indices(const Regionalization& r,
                                                 const SpatialDataset& ds);

/// Region id for every location; same rules as assign_location_indices.
std::vector<RegionId> assign_locations(const Regionalization& r, const SpatialDataset& ds);

/// Location indices per region, in region order.
std::vector<std::vector<std::size_t>> members_by_region(const Regionalization& r,
                                                        const SpatialDataset& ds);

}  // namespace sbss
