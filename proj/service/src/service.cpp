#include "sbss/service.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <random>
#include <regex>

#include "sbss/csv.hpp"
#include "sbss/edit.hpp"
#include "sbss/error.hpp"
#include "sbss/export.hpp"
#include "sbss/guidance.hpp"
#include "sbss/metrics.hpp"
#include "sbss/sbss.hpp"
#include "sbss/serialize.hpp"
#include "sbss/variogram.hpp"
#include "sbss/workspace.hpp"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace fs = std::filesystem;

namespace sbss {

ServiceConfig ServiceConfig::from_environment() {
  ServiceConfig c;
  if (const char* bind = std::getenv("SBSS_BIND")) {
    const std::string s = bind;
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) {
      c.host = s;
    } else {
      c.host = s.substr(0, colon);
      c.port = std::stoi(s.substr(colon + 1));
    }
  }
  if (const char* root = std::getenv("SBSS_WORKSPACE_ROOT")) c.workspace_root = root;
  if (const char* origin = std::getenv("SBSS_UI_ORIGIN")) c.ui_origin = origin;
  return c;
}

namespace {

using httplib::Request;
using httplib::Response;

/// Error raised by request handling itself (unknown routes, bad ids).
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::string field;
};

json error_body(int status, const std::string& code, const std::string& message,
                const std::string& field) {
  json body = {{"status", status}, {"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  return body;
}

void send_json(Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json request_json(const Request& req) {
  if (req.body.empty()) return json(nullptr);
  return parse_json(req.body);
}

std::string query(const Request& req, const std::string& key, const std::string& fallback = {}) {
  return req.has_param(key) ? req.get_param_value(key) : fallback;
}

bool query_flag(const Request& req, const std::string& key) {
  const std::string v = query(req, key);
  return v == "1" || v == "true" || v == "yes";
}

std::size_t query_count(const Request& req, const std::string& key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit) || v.size() > 9) {
    throw_validation("invalid_params", key + " must be a non-negative integer", key);
  }
  return static_cast<std::size_t>(std::stoul(v));
}

std::optional<double> query_number(const Request& req, const std::string& key) {
  if (!req.has_param(key)) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string v = req.get_param_value(key);
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(key);
    return d;
  } catch (const std::exception&) {
    throw_validation("invalid_params", key + " must be a number", key);
  }
}

ParameterSetting setting_member(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw_validation("schema_violation", std::string("missing '") + key + "'",
                     std::string("/") + key);
  }
  try {
    return setting_from_json(body[key]);
  } catch (const Error& e) {
    throw Error(e.kind(), e.code(), e.what(), std::string("/") + key + e.field());
  }
}

RegionId id_member(const json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw_validation("schema_violation", "expected an integer id", pointer);
  return v.get<RegionId>();
}

std::size_t region_index(const ParameterSetting& s, RegionId id, const std::string& pointer) {
  for (std::size_t k = 0; k < s.regionalization.regions.size(); ++k) {
    if (s.regionalization.regions[k].id() == id) return k;
  }
  throw_validation("unknown_region", "no region with id " + std::to_string(id), pointer);
}

std::string random_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  static const char* hex = "0123456789abcdef";
  std::string id;
  std::uint64_t v = rng();
  for (int k = 0; k < 12; ++k, v >>= 4) id.push_back(hex[v & 15]);
  return id;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;

  std::mutex registry_mutex;
  std::map<std::string, std::shared_ptr<const Workspace>> workspaces;

  std::mutex guidance_mutex;
  std::map<std::string, std::shared_future<std::string>> guidance_cache;  // ws id + params
  std::atomic<std::size_t> guidance_runs{0};

  explicit Impl(ServiceConfig c) : config(std::move(c)) { routes(); }

  std::shared_ptr<const Workspace> workspace(const std::string& id) {
    static const std::regex valid("[A-Za-z0-9_-]+");
    if (!std::regex_match(id, valid)) {
      throw Error(ErrorKind::not_found, "unknown_workspace", "unknown workspace " + id);
    }
    std::lock_guard lock(registry_mutex);
    auto it = workspaces.find(id);
    if (it != workspaces.end()) return it->second;
    auto ws = std::make_shared<const Workspace>(Workspace::open(config.workspace_root / id));
    workspaces.emplace(id, ws);
    return ws;
  }

  // Wraps a handler with the error mapping. Validation failures become
  // `validation_status` (malformed JSON is always 400).
  template <typename F>
  httplib::Server::Handler guarded(F fn, int validation_status = 422) {
    return [fn, validation_status](const Request& req, Response& res) {
      try {
        fn(req, res);
      } catch (const ApiError& e) {
        send_json(res, error_body(e.status, e.code, e.message, e.field), e.status);
      } catch (const Error& e) {
        int status = 500;
        switch (e.kind()) {
          case ErrorKind::validation:
            status = (e.code() == "invalid_json" || e.code() == "schema_violation")
                         ? 400
                         : validation_status;
            break;
          case ErrorKind::numeric:
            status = 422;
            break;
          case ErrorKind::not_found:
            status = 404;
            break;
          case ErrorKind::io:
            status = 500;
            break;
        }
        send_json(res, error_body(status, e.code(), e.what(), e.field()), status);
      } catch (const json::exception& e) {
        send_json(res, error_body(400, "schema_violation", e.what(), ""), 400);
      } catch (const std::exception& e) {
        send_json(res, error_body(500, "internal_error", e.what(), ""), 500);
      }
    };
  }

  json summary(const std::string& id, const Workspace& ws) {
    const SpatialDataset& ds = ws.dataset();
    const BoundingBox box = bounding_box(ds.locations());
    return {{"id", id},
            {"locations", ds.size()},
            {"variables", ds.variable_names()},
            {"crs_note", ds.crs_note()},
            {"bbox", {box.min_x, box.min_y, box.max_x, box.max_y}},
            {"has_guidance", ws.guidance_text().has_value()},
            {"history_count", ws.history().size()},
            {"annotations", ws.annotation_ids()}};
  }

  void create_workspace(const Request& req, Response& res) {
    std::string csv, x_col, y_col, coords;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("file")) {
        throw_validation("missing_file", "multipart upload needs a 'file' part", "file");
      }
      csv = req.get_file_value("file").content;
      auto field = [&](const char* key) {
        return req.has_file(key) ? req.get_file_value(key).content : query(req, key);
      };
      x_col = field("x_column");
      y_col = field("y_column");
      coords = field("coordinates");
    } else {
      csv = req.body;
      x_col = query(req, "x_column");
      y_col = query(req, "y_column");
      coords = query(req, "coordinates");
    }
    if (x_col.empty()) throw_validation("missing_column", "x_column not given", "x_column");
    if (y_col.empty()) throw_validation("missing_column", "y_column not given", "y_column");
    if (!coords.empty() && coords != "planar" && coords != "lonlat") {
      throw_validation("invalid_params", "coordinates must be planar or lonlat", "coordinates");
    }
    const SpatialDataset ds = ingest_csv_text(
        csv, x_col, y_col, coords == "lonlat" ? CoordinateKind::lonlat : CoordinateKind::planar);
    fs::create_directories(config.workspace_root);
    std::string id;
    do {
      id = random_id();
    } while (fs::exists(config.workspace_root / id));
    auto ws = std::make_shared<const Workspace>(
        Workspace::create(config.workspace_root / id, ds, false));
    {
      std::lock_guard lock(registry_mutex);
      workspaces.emplace(id, ws);
    }
    json body = summary(id, *ws);
    res.set_header("Location", "/workspaces/" + id);
    send_json(res, body, 201);
  }

  void guidance(const Request& req, Response& res) {
    const std::string id = req.matches[1];
    const auto ws = workspace(id);
    const GuidanceParams params = params_from_json(request_json(req));
    validate(params, ws->dataset().size());
    const std::string key = id + "\n" + params_to_json(params).dump();

    std::shared_future<std::string> result;
    std::promise<std::string> promise;
    bool owner = false;
    {
      std::lock_guard lock(guidance_mutex);
      auto it = guidance_cache.find(key);
      if (it != guidance_cache.end()) {
        result = it->second;
      } else {
        result = promise.get_future().share();
        guidance_cache.emplace(key, result);
        owner = true;
      }
    }
    if (owner) {
      try {
        ++guidance_runs;
        const GuidanceBundle bundle = compute_guidance(ws->dataset(), params);
        std::string text = guidance_to_json(bundle, ws->dataset().variable_names()).dump();
        ws->store_guidance(text + "\n");
        promise.set_value(std::move(text));
      } catch (...) {
        {
          std::lock_guard lock(guidance_mutex);
          guidance_cache.erase(key);
        }
        promise.set_exception(std::current_exception());
      }
    }
    res.set_content(result.get(), "application/json");
  }

  void split(const Request& req, Response& res) {
    const auto ws = workspace(req.matches[1]);
    (void)ws;
    const json body = request_json(req);
    ParameterSetting setting = setting_member(body, "setting");
    const RegionId target = id_member(body.value("region_id", json()), "/region_id");
    if (!body.contains("cut") || !body["cut"].is_array()) {
      throw_validation("schema_violation", "cut must be an array of positions", "/cut");
    }
    std::vector<Point> cut;
    for (std::size_t k = 0; k < body["cut"].size(); ++k) {
      const json& p = body["cut"][k];
      if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
        throw_validation("schema_violation", "invalid position", "/cut/" + std::to_string(k));
      }
      cut.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    auto& regions = setting.regionalization.regions;
    const std::size_t k = region_index(setting, target, "/region_id");
    RegionId next = 0;
    for (const Region& r : regions) next = std::max(next, r.id() + 1);
    if (body.contains("new_id")) next = id_member(body["new_id"], "/new_id");
    auto [a, b] = split_region(regions[k], cut, next);
    regions[k] = std::move(a);
    regions.insert(regions.begin() + static_cast<std::ptrdiff_t>(k) + 1, std::move(b));
    send_json(res, {{"setting", setting_to_json(setting)}});
  }

  void merge(const Request& req, Response& res) {
    const auto ws = workspace(req.matches[1]);
    (void)ws;
    const json body = request_json(req);
    ParameterSetting setting = setting_member(body, "setting");
    if (!body.contains("region_ids") || !body["region_ids"].is_array() ||
        body["region_ids"].size() != 2) {
      throw_validation("schema_violation", "region_ids must list two ids", "/region_ids");
    }
    const RegionId ia = id_member(body["region_ids"][0], "/region_ids/0");
    const RegionId ib = id_member(body["region_ids"][1], "/region_ids/1");
    if (ia == ib) throw_validation("invalid_params", "cannot merge a region with itself", "/region_ids");
    auto& regions = setting.regionalization.regions;
    std::size_t ka = region_index(setting, ia, "/region_ids/0");
    std::size_t kb = region_index(setting, ib, "/region_ids/1");
    Region merged = merge_regions(regions[ka], regions[kb]);
    if (ka > kb) std::swap(ka, kb);
    regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(kb));
    regions[ka] = std::move(merged);
    send_json(res, {{"setting", setting_to_json(setting)}});
  }

  void metrics(const Request& req, Response& res) {
    const auto ws = workspace(req.matches[1]);
    const ParameterSetting setting = setting_from_json(request_json(req));
    const double threshold = query_number(req, "threshold").value_or(kDefaultThreshold);
    const SettingMetrics m = setting_metrics(ws->dataset(), setting, threshold,
                                             query_flag(req, "include_experimental"));
    json body = metrics_to_json(m, setting.kernel);
    body["threshold"] = threshold;
    send_json(res, body);
  }

  void sbss_run(const Request& req, Response& res) {
    const std::string id = req.matches[1];
    const auto ws = workspace(id);
    const ParameterSetting setting = setting_from_json(request_json(req));
    SbssOptions options;
    const std::string norm = query(req, "normalization", "locations");
    if (norm == "pairs") {
      options.normalization = LocalNormalization::pairs;
    } else if (norm != "locations") {
      throw_validation("invalid_params", "normalization must be locations or pairs",
                       "normalization");
    }
    const SbssResult result = run_sbss(ws->dataset(), setting, options);
    std::string relative;
    const fs::path dir = ws->reserve_result_dir(relative);
    const auto files = export_result(result, dir, ExportFormat::csv);
    const std::size_t index = ws->append_history(setting, relative);

    json body = sbss_summary_to_json(result);
    body["history_index"] = index;
    body["result"] = relative;
    json urls = json::object();
    for (const auto& f : files) urls[f] = "/workspaces/" + id + "/" + relative + "/" + f;
    body["files"] = std::move(urls);
    send_json(res, body);
  }

  void save_history(const Request& req, Response& res) {
    const auto ws = workspace(req.matches[1]);
    const ParameterSetting setting = setting_from_json(request_json(req));
    const std::size_t index = ws->append_history(setting);
    send_json(res, {{"index", index}}, 201);
  }

  static json entry_json(const HistoryEntry& e) {
    return {{"index", e.index},
            {"setting", setting_to_json(e.setting)},
            {"result", e.result ? json(*e.result) : json(nullptr)}};
  }

  void routes() {
    server.set_post_routing_handler([this](const Request&, Response& res) {
      if (!config.ui_origin.empty()) {
        res.set_header("Access-Control-Allow-Origin", config.ui_origin);
        res.set_header("Vary", "Origin");
      }
    });
    server.Options(R"(/.*)", [this](const Request&, Response& res) {
      if (!config.ui_origin.empty()) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      }
      res.status = 204;
    });

    server.Get("/health", [](const Request&, Response& res) {
      send_json(res, {{"status", "ok"}});
    });

    server.Post("/workspaces", guarded([this](const Request& req, Response& res) {
                  create_workspace(req, res);
                }, 400));

    const std::string ws = R"(/workspaces/([A-Za-z0-9_-]+))";

    server.Get(ws, guarded([this](const Request& req, Response& res) {
                 const std::string id = req.matches[1];
                 send_json(res, summary(id, *workspace(id)));
               }));

    server.Get(ws + "/dataset", guarded([this](const Request& req, Response& res) {
                 res.set_content(dataset_to_csv(workspace(req.matches[1])->dataset()), "text/csv");
               }));

    server.Post(ws + "/guidance", guarded([this](const Request& req, Response& res) {
                  guidance(req, res);
                }));
    server.Get(ws + "/guidance", guarded([this](const Request& req, Response& res) {
                 const auto text = workspace(req.matches[1])->guidance_text();
                 if (!text) throw ApiError{404, "no_guidance", "guidance not computed yet", ""};
                 res.set_content(*text, "application/json");
               }));

    server.Post(ws + "/regions/split", guarded([this](const Request& req, Response& res) {
                  split(req, res);
                }));
    server.Post(ws + "/regions/merge", guarded([this](const Request& req, Response& res) {
                  merge(req, res);
                }));
    server.Post(ws + "/metrics", guarded([this](const Request& req, Response& res) {
                  metrics(req, res);
                }));
    server.Post(ws + "/sbss", guarded([this](const Request& req, Response& res) {
                  sbss_run(req, res);
                }));

    server.Post(ws + "/history", guarded([this](const Request& req, Response& res) {
                  save_history(req, res);
                }));
    server.Get(ws + "/history", guarded([this](const Request& req, Response& res) {
                 json entries = json::array();
                 for (const auto& e : workspace(req.matches[1])->history()) {
                   entries.push_back(entry_json(e));
                 }
                 send_json(res, {{"entries", std::move(entries)}});
               }));
    server.Get(ws + R"(/history/(\d+))", guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 send_json(res, entry_json(w->history_entry(std::stoul(req.matches[2]))));
               }));

    server.Get(ws + "/distance-density", guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 const std::size_t bins = query_count(req, "bins", 30);
                 send_json(res, distance_density_to_json(distance_density(w->dataset(), bins)));
               }));

    server.Get(ws + "/variograms", guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 const DistanceMatrix d = pairwise_distances(w->dataset());
                 const std::size_t bins = query_count(req, "bins", 15);
                 const double max_lag = query_number(req, "max_lag").value_or(0.5 * d.max());
                 if (bins == 0) throw_validation("invalid_params", "bins must be positive", "bins");
                 if (!(max_lag > 0.0)) {
                   throw_validation("invalid_params", "max_lag must be positive", "max_lag");
                 }
                 VariogramOptions options;
                 if (req.has_param("semivariance")) options.semivariance = query_flag(req, "semivariance");
                 const VariogramSet v = variograms(w->dataset(), d, bins, max_lag, options);
                 json body = variograms_to_json(v, w->dataset().variable_names());
                 body["max_lag"] = max_lag;
                 body["semivariance"] = options.semivariance;
                 send_json(res, body);
               }));

    server.Get(ws + "/variable-grid", guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 const SpatialDataset& ds = w->dataset();
                 const std::size_t side = query_count(req, "grid_side", 6);
                 std::vector<std::size_t> wanted;
                 if (req.has_param("variable")) {
                   const std::string name = req.get_param_value("variable");
                   const auto& names = ds.variable_names();
                   const auto it = std::find(names.begin(), names.end(), name);
                   if (it == names.end()) {
                     throw_validation("unknown_variable", "unknown variable " + name, "variable");
                   }
                   wanted.push_back(static_cast<std::size_t>(it - names.begin()));
                 } else {
                   for (std::size_t v = 0; v < ds.dimension(); ++v) wanted.push_back(v);
                 }
                 json vars = json::array();
                 for (std::size_t v : wanted) {
                   vars.push_back(grid_summary_to_json(variable_grid_summary(ds, v, side), side,
                                                       ds.variable_names()[v]));
                 }
                 send_json(res, {{"grid_side", side}, {"variables", std::move(vars)}});
               }));

    server.Get(ws + "/annotations", guarded([this](const Request& req, Response& res) {
                 send_json(res, {{"ids", workspace(req.matches[1])->annotation_ids()}});
               }));
    server.Post(ws + "/annotations", guarded([this](const Request& req, Response& res) {
                  const auto w = workspace(req.matches[1]);
                  send_json(res, {{"id", w->store_annotation(req.body)}}, 201);
                }, 400));
    server.Get(ws + R"(/annotations/(\d+))", guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 res.set_content(w->annotation(std::stoul(req.matches[2])), "application/geo+json");
               }));
    server.Get(ws + R"(/annotations/(\d+)/boundaries)",
               guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 const auto lines =
                     feature_boundaries(parse_json(w->annotation(std::stoul(req.matches[2]))));
                 json out = json::array();
                 for (const auto& line : lines) {
                   json pts = json::array();
                   for (const Point& p : line) pts.push_back({p.x, p.y});
                   out.push_back(std::move(pts));
                 }
                 send_json(res, {{"lines", std::move(out)}});
               }));

    server.Get(ws + R"(/results/(\d+)/(W\.csv|scores\.csv|diagnostics\.json))",
               guarded([this](const Request& req, Response& res) {
                 const auto w = workspace(req.matches[1]);
                 const std::string file = req.matches[3];
                 const fs::path path = w->dir() / "results" / std::string(req.matches[2]) / file;
                 if (!fs::exists(path)) throw ApiError{404, "unknown_result", "no such result file", ""};
                 res.set_content(read_text_file(path),
                                 file.ends_with(".json") ? "application/json" : "text/csv");
               }));

    server.set_error_handler([](const Request&, Response& res) {
      if (res.body.empty()) {
        const int status = res.status;
        send_json(res, error_body(status, status == 404 ? "not_found" : "http_error",
                                  status == 404 ? "no such endpoint" : "request failed", ""),
                  status);
      }
    });
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Service::~Service() { stop(); }

bool Service::listen() { return impl_->server.listen(impl_->config.host, impl_->config.port); }
int Service::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool Service::serve() { return impl_->server.listen_after_bind(); }
void Service::stop() {
  if (impl_) impl_->server.stop();
}
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }
std::size_t Service::guidance_computations() const { return impl_->guidance_runs.load(); }

}  // namespace sbss
