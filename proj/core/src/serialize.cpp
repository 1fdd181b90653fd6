#include "sbss/serialize.hpp"

#include <cmath>
#include <ctime>
#include <set>

#include "sbss/error.hpp"

namespace sbss {

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
  throw_validation("schema_violation", message, pointer.empty() ? "/" : pointer);
}

const json& member(const json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object()) schema_error(pointer, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(pointer + "/" + key, std::string("missing '") + key + "'");
  return *it;
}

double number_at(const json& v, const std::string& pointer) {
  if (!v.is_number()) schema_error(pointer, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(pointer, "expected a finite number");
  return d;
}

Point position_at(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.size() < 2) schema_error(pointer, "expected a position [x, y]");
  return {number_at(v[0], pointer + "/0"), number_at(v[1], pointer + "/1")};
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw_validation("invalid_json", std::string("malformed JSON: ") + e.what());
  }
}

json region_to_json(const Region& region) {
  json ring = json::array();
  for (const Point& p : region.boundary()) ring.push_back({p.x, p.y});
  ring.push_back(ring.front());
  return {{"type", "Feature"},
          {"properties", {{"id", region.id()}}},
          {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}};
}

json regionalization_to_json(const Regionalization& r) {
  json features = json::array();
  for (const Region& region : r.regions) features.push_back(region_to_json(region));
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json kernel_to_json(const KernelConfig& kernel) {
  json rings = json::array();
  for (const KernelRing& ring : kernel.rings) {
    rings.push_back({{"inner", ring.inner}, {"outer", ring.outer}});
  }
  return rings;
}

Regionalization regionalization_from_json(const json& doc, const std::string& pointer) {
  const json& type = member(doc, "type", pointer);
  if (type != "FeatureCollection") schema_error(pointer + "/type", "expected a FeatureCollection");
  const json& features = member(doc, "features", pointer);
  if (!features.is_array()) schema_error(pointer + "/features", "expected an array");

  Regionalization out;
  for (std::size_t f = 0; f < features.size(); ++f) {
    const std::string at = pointer + "/features/" + std::to_string(f);
    const json& feature = features[f];
    const json& geometry = member(feature, "geometry", at);
    if (member(geometry, "type", at + "/geometry") != "Polygon") {
      schema_error(at + "/geometry/type", "regions must be Polygon geometries");
    }
    const json& rings = member(geometry, "coordinates", at + "/geometry");
    if (!rings.is_array() || rings.empty()) {
      schema_error(at + "/geometry/coordinates", "expected one linear ring");
    }
    if (rings.size() > 1) schema_error(at + "/geometry/coordinates/1", "regions cannot have holes");
    const std::string ring_at = at + "/geometry/coordinates/0";
    const json& ring = rings[0];
    if (!ring.is_array() || ring.size() < 4) {
      schema_error(ring_at, "a linear ring needs at least four positions");
    }
    std::vector<Point> points;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      points.push_back(position_at(ring[k], ring_at + "/" + std::to_string(k)));
    }
    if (points.front() != points.back()) schema_error(ring_at, "linear ring is not closed");
    points.pop_back();

    RegionId id = static_cast<RegionId>(f);
    const auto props = feature.find("properties");
    if (props != feature.end() && props->is_object() && props->contains("id")) {
      const json& v = (*props)["id"];
      if (!v.is_number_integer()) schema_error(at + "/properties/id", "region id must be an integer");
      id = v.get<RegionId>();
    }
    try {
      out.regions.emplace_back(id, points);
    } catch (const Error& e) {
      throw_validation(e.code(), e.what(), ring_at);
    }
  }

  std::set<RegionId> ids;
  for (std::size_t k = 0; k < out.regions.size(); ++k) {
    if (!ids.insert(out.regions[k].id()).second) {
      schema_error(pointer + "/features/" + std::to_string(k) + "/properties/id",
                   "duplicate region id");
    }
  }
  return out;
}

KernelConfig kernel_from_json(const json& doc, const std::string& pointer) {
  if (!doc.is_array()) schema_error(pointer, "kernel must be an array of rings");
  KernelConfig out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string at = pointer + "/" + std::to_string(k);
    out.rings.push_back({number_at(member(doc[k], "inner", at), at + "/inner"),
                         number_at(member(doc[k], "outer", at), at + "/outer")});
  }
  return out;
}

json setting_to_json(const ParameterSetting& setting) {
  json doc = setting.extra.is_object() ? setting.extra : json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["label"] = setting.label;
  doc["created_at"] = setting.created_at;
  doc["regions"] = regionalization_to_json(setting.regionalization);
  doc["kernel"] = kernel_to_json(setting.kernel);
  return doc;
}

ParameterSetting setting_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("", "setting must be a JSON object");
  if (doc.contains("schema_version")) {
    const json& v = doc["schema_version"];
    if (!v.is_number_integer() || v.get<int>() < 1) {
      schema_error("/schema_version", "schema_version must be a positive integer");
    }
    if (v.get<int>() > kSchemaVersion) {
      throw_validation("unsupported_schema_version",
                       "schema_version " + v.dump() + " is newer than supported",
                       "/schema_version");
    }
  }
  ParameterSetting out;
  for (const char* key : {"label", "created_at"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_string()) schema_error(std::string("/") + key, "expected a string");
  }
  out.label = doc.value("label", "");
  out.created_at = doc.value("created_at", "");
  out.regionalization = regionalization_from_json(member(doc, "regions", ""), "/regions");
  out.kernel = kernel_from_json(member(doc, "kernel", ""), "/kernel");
  const ValidityReport report = validate_kernel(out.kernel);
  if (!report.ok()) throw_validation("invalid_kernel", report.violations.front(), "/kernel");

  static const std::set<std::string> known = {"schema_version", "label", "created_at",
                                              "regions", "kernel"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) out.extra[key] = value;
  }
  return out;
}

ParameterSetting parse_setting(std::string_view text) {
  return setting_from_json(parse_json(text));
}

json params_to_json(const GuidanceParams& p) {
  return {{"grid_max", p.grid_max},
          {"k_min", p.k_min},
          {"k_max", p.k_max},
          {"kernel_depth", p.kernel_depth},
          {"max_radius", optional_number(p.max_radius)},
          {"threshold", p.threshold},
          {"variogram_bins", p.variogram_bins},
          {"max_lag", optional_number(p.max_lag)}};
}

GuidanceParams params_from_json(const json& doc) {
  GuidanceParams p;
  if (doc.is_null()) return p;
  if (!doc.is_object()) throw_validation("invalid_params", "params must be an object");
  auto count = [&](const char* key, std::size_t& out) {
    if (!doc.contains(key)) return;
    const json& v = doc[key];
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw_validation("invalid_params", std::string(key) + " must be a non-negative integer",
                       key);
    }
    out = v.get<std::size_t>();
  };
  auto real = [&](const char* key) -> std::optional<double> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_number()) {
      throw_validation("invalid_params", std::string(key) + " must be a number", key);
    }
    return doc[key].get<double>();
  };
  static const std::set<std::string> known = {"grid_max", "k_min", "k_max",
                                              "kernel_depth", "max_radius", "threshold",
                                              "variogram_bins", "max_lag"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw_validation("invalid_params", "unknown parameter " + key, key);
  }
  count("grid_max", p.grid_max);
  count("k_min", p.k_min);
  count("k_max", p.k_max);
  count("kernel_depth", p.kernel_depth);
  count("variogram_bins", p.variogram_bins);
  p.max_radius = real("max_radius");
  p.max_lag = real("max_lag");
  if (auto t = real("threshold")) p.threshold = *t;
  return p;
}

json variograms_to_json(const VariogramSet& set, const std::vector<std::string>& names) {
  json variables = json::array();
  for (std::size_t v = 0; v < set.per_variable.size(); ++v) {
    json gamma = json::array();
    for (const auto& g : set.per_variable[v]) gamma.push_back(optional_number(g));
    variables.push_back({{"name", v < names.size() ? names[v] : std::to_string(v)},
                         {"gamma", std::move(gamma)}});
  }
  json dispersion = json::array();
  for (const auto& d : set.dispersion) dispersion.push_back(optional_number(d));
  return {{"edges", set.edges},
          {"pair_counts", set.pair_counts},
          {"variables", std::move(variables)},
          {"dispersion", std::move(dispersion)}};
}

json guidance_to_json(const GuidanceBundle& bundle, const std::vector<std::string>& names) {
  json regionalizations = json::array();
  for (const SuggestedRegionalization& s : bundle.regionalizations) {
    json metrics = json::array();
    for (const RegionMetrics& m : s.metrics) {
      metrics.push_back({{"id", m.id},
                         {"count", m.count},
                         {"flagged", m.flagged},
                         {"cov_diff", optional_number(m.cov_diff)}});
    }
    regionalizations.push_back({{"source", s.source},
                                {"parameter", s.parameter},
                                {"regions", regionalization_to_json(s.regionalization)},
                                {"metrics", std::move(metrics)}});
  }
  json kernels = json::array();
  for (const KernelSuggestion& k : bundle.kernel_suggestions) {
    kernels.push_back({{"inner", k.ring.inner},
                       {"outer", k.ring.outer},
                       {"mean_counts", k.mean_counts},
                       {"flagged", k.flagged}});
  }
  return {{"schema_version", kSchemaVersion},
          {"params", params_to_json(bundle.params)},
          {"regionalizations", std::move(regionalizations)},
          {"kernel_suggestions", std::move(kernels)},
          {"variograms", variograms_to_json(bundle.variograms, names)}};
}

json distance_density_to_json(const DistanceHistogram& histogram) {
  return {{"edges", histogram.edges}, {"counts", histogram.counts}};
}

json grid_summary_to_json(const std::vector<GridSummaryCell>& cells, std::size_t grid_side,
                          const std::string& variable) {
  json out = json::array();
  for (const GridSummaryCell& c : cells) {
    out.push_back({{"cell", c.cell},
                   {"center", {c.center.x, c.center.y}},
                   {"median", c.median},
                   {"sextile", c.sextile},
                   {"count", c.count}});
  }
  return {{"variable", variable}, {"grid_side", grid_side}, {"cells", std::move(out)}};
}

json metrics_to_json(const SettingMetrics& metrics, const KernelConfig& kernel) {
  json regions = json::array();
  for (std::size_t k = 0; k < metrics.regions.size(); ++k) {
    const RegionCount& rc = metrics.regions[k];
    const KernelCount& kc = metrics.kernels[k];
    json rings = json::array();
    for (std::size_t r = 0; r < kernel.rings.size(); ++r) {
      json ring = {{"inner", kernel.rings[r].inner},
                   {"outer", kernel.rings[r].outer},
                   {"mean_count", kc.ring_means[r]},
                   {"flagged", static_cast<bool>(kc.ring_flagged[r])}};
      if (metrics.eigenvalue_difference) {
        ring["eigenvalue_difference"] = optional_number((*metrics.eigenvalue_difference)[k][r]);
      }
      rings.push_back(std::move(ring));
    }
    regions.push_back({{"id", rc.id},
                       {"count", rc.count},
                       {"flagged", rc.flagged},
                       {"cov_diff", optional_number(metrics.cov_diff[k])},
                       {"kernel_mean_count", kc.config_mean},
                       {"kernel_flagged", kc.config_flagged},
                       {"rings", std::move(rings)}});
  }
  return {{"regions", std::move(regions)}};
}

json sbss_summary_to_json(const SbssResult& result) {
  json labels = json::array();
  for (const LocalMatrixLabel& l : result.local_matrices) {
    labels.push_back({{"region", l.region}, {"ring", l.ring}});
  }
  return {{"schema_version", kSchemaVersion},
          {"variable_names", result.variable_names},
          {"unmixing", matrix_rows(result.unmixing)},
          {"component_order", result.component_order},
          {"local_matrices", std::move(labels)},
          {"pseudo_eigenvalues", matrix_rows(result.pseudo_eigenvalues)},
          {"off_diagonal_trace", result.off_diagonal_trace},
          {"sweeps", result.sweeps},
          {"converged", result.converged}};
}

namespace {

[[noreturn]] void geojson_error(const std::string& pointer, const std::string& message) {
  throw_validation("invalid_geojson", message, pointer);
}

void check_position(const json& v, const std::string& at) {
  if (!v.is_array() || v.size() < 2 || !v[0].is_number() || !v[1].is_number()) {
    geojson_error(at, "invalid position");
  }
}

void check_positions(const json& v, const std::string& at, std::size_t min_count,
                     bool closed) {
  if (!v.is_array() || v.size() < min_count) {
    geojson_error(at, "expected at least " + std::to_string(min_count) + " positions");
  }
  for (std::size_t k = 0; k < v.size(); ++k) check_position(v[k], at + "/" + std::to_string(k));
  if (closed && v.front() != v.back()) geojson_error(at, "linear ring is not closed");
}

void check_nested(const json& v, const std::string& at, int depth, std::size_t min_count,
                  bool closed) {
  if (depth == 0) {
    check_positions(v, at, min_count, closed);
    return;
  }
  if (!v.is_array()) geojson_error(at, "expected an array");
  for (std::size_t k = 0; k < v.size(); ++k) {
    check_nested(v[k], at + "/" + std::to_string(k), depth - 1, min_count, closed);
  }
}

void check_geometry(const json& g, const std::string& at) {
  if (g.is_null()) return;
  if (!g.is_object() || !g.contains("type") || !g["type"].is_string()) {
    geojson_error(at, "geometry needs a type");
  }
  const std::string type = g["type"];
  if (type == "GeometryCollection") {
    if (!g.contains("geometries") || !g["geometries"].is_array()) {
      geojson_error(at + "/geometries", "expected an array");
    }
    for (std::size_t k = 0; k < g["geometries"].size(); ++k) {
      check_geometry(g["geometries"][k], at + "/geometries/" + std::to_string(k));
    }
    return;
  }
  if (!g.contains("coordinates")) geojson_error(at + "/coordinates", "missing coordinates");
  const json& c = g["coordinates"];
  const std::string cat = at + "/coordinates";
  if (type == "Point") {
    check_position(c, cat);
  } else if (type == "MultiPoint") {
    check_positions(c, cat, 0, false);
  } else if (type == "LineString") {
    check_positions(c, cat, 2, false);
  } else if (type == "MultiLineString") {
    check_nested(c, cat, 1, 2, false);
  } else if (type == "Polygon") {
    check_nested(c, cat, 1, 4, true);
  } else if (type == "MultiPolygon") {
    check_nested(c, cat, 2, 4, true);
  } else {
    geojson_error(at + "/type", "unknown geometry type '" + type + "'");
  }
}

void collect_lines(const json& g, std::vector<std::vector<Point>>& out) {
  if (!g.is_object()) return;
  const std::string type = g.value("type", "");
  auto line = [&](const json& positions) {
    std::vector<Point> pts;
    for (const json& p : positions) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    out.push_back(std::move(pts));
  };
  if (type == "LineString") {
    line(g["coordinates"]);
  } else if (type == "MultiLineString" || type == "Polygon") {
    for (const json& l : g["coordinates"]) line(l);
  } else if (type == "MultiPolygon") {
    for (const json& poly : g["coordinates"]) {
      for (const json& l : poly) line(l);
    }
  } else if (type == "GeometryCollection") {
    for (const json& sub : g["geometries"]) collect_lines(sub, out);
  }
}

}  // namespace

void validate_feature_collection(const json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    geojson_error("/type", "expected a FeatureCollection");
  }
  if (!doc.contains("features") || !doc["features"].is_array()) {
    geojson_error("/features", "expected a features array");
  }
  const json& features = doc["features"];
  for (std::size_t f = 0; f < features.size(); ++f) {
    const std::string at = "/features/" + std::to_string(f);
    const json& feature = features[f];
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      geojson_error(at, "feature " + std::to_string(f) + " is not a Feature");
    }
    if (!feature.contains("geometry")) {
      geojson_error(at + "/geometry", "feature " + std::to_string(f) + " has no geometry");
    }
    try {
      check_geometry(feature["geometry"], at + "/geometry");
    } catch (const Error& e) {
      geojson_error(e.field(), "feature " + std::to_string(f) + ": " + e.what());
    }
  }
}

std::vector<std::vector<Point>> feature_boundaries(const json& doc) {
  validate_feature_collection(doc);
  std::vector<std::vector<Point>> out;
  for (const json& feature : doc["features"]) collect_lines(feature["geometry"], out);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sbss
