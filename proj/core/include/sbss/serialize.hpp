#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sbss/guidance.hpp"
#include "sbss/metrics.hpp"
#include "sbss/model.hpp"
#include "sbss/sbss.hpp"

namespace sbss {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parses JSON text; throws Error(validation, "invalid_json").
json parse_json(std::string_view text);

/// Polygon Feature with an `id` property and a closed outer ring.
json region_to_json(const Region& region);
json regionalization_to_json(const Regionalization& r);
json kernel_to_json(const KernelConfig& kernel);

/// Reads a FeatureCollection of Polygon features. Errors are
/// Error(validation, "schema_violation") with a JSON pointer in field(),
/// rooted at `pointer`.
Regionalization regionalization_from_json(const json& doc, const std::string& pointer = "");
KernelConfig kernel_from_json(const json& doc, const std::string& pointer = "");

/// Full setting document, schema_version 1. Unknown top-level fields from
/// `extra` are written back unchanged.
json setting_to_json(const ParameterSetting& setting);

/// Inverse of setting_to_json. Rejects overlapping rings
/// ("invalid_kernel", field "/kernel"); unknown fields land in `extra`.
ParameterSetting setting_from_json(const json& doc);
ParameterSetting parse_setting(std::string_view text);

json params_to_json(const GuidanceParams& params);
/// Missing fields keep their defaults; wrong types are schema violations.
GuidanceParams params_from_json(const json& doc);

json guidance_to_json(const GuidanceBundle& bundle, const std::vector<std::string>& names);
json variograms_to_json(const VariogramSet& set, const std::vector<std::string>& names);
json distance_density_to_json(const DistanceHistogram& histogram);
json grid_summary_to_json(const std::vector<GridSummaryCell>& cells, std::size_t grid_side,
                          const std::string& variable);
json metrics_to_json(const SettingMetrics& metrics, const KernelConfig& kernel);

/// W, component order and convergence diagnostics; no scores.
json sbss_summary_to_json(const SbssResult& result);

/// Checks a GeoJSON FeatureCollection; errors name the feature index
/// ("invalid_geojson", field "/features/<i>/...").
void validate_feature_collection(const json& doc);

/// Every ring or line of every feature as a point list, for snapping.
std::vector<std::vector<Point>> feature_boundaries(const json& doc);

/// Current UTC time, ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace sbss
