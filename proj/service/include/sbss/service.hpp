#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace sbss {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path workspace_root = "workspaces";
  std::string ui_origin;  // CORS allow-origin; empty disables CORS headers

  /// SBSS_BIND ("host:port"), SBSS_WORKSPACE_ROOT, SBSS_UI_ORIGIN.
  static ServiceConfig from_environment();
};

/// HTTP JSON API over a directory of workspaces.
///
///   POST /workspaces                          CSV upload -> 201 {id}
///   GET  /workspaces/{id}                     summary
///   GET  /workspaces/{id}/dataset             dataset.csv
///   POST /workspaces/{id}/guidance            params -> guidance bundle (cached)
///   GET  /workspaces/{id}/guidance            last stored bundle
///   POST /workspaces/{id}/regions/split       {setting, region_id, cut}
///   POST /workspaces/{id}/regions/merge       {setting, region_ids}
///   POST /workspaces/{id}/metrics             setting -> metric report
///   POST /workspaces/{id}/sbss                setting -> W, diagnostics, file URLs
///   POST /workspaces/{id}/history             setting -> 201 {index}
///   GET  /workspaces/{id}/history[/{n}]
///   GET  /workspaces/{id}/distance-density    ?bins=
///   GET  /workspaces/{id}/variograms          ?bins=&max_lag=&semivariance=
///   GET  /workspaces/{id}/variable-grid       ?variable=&grid_side=
///   GET  /workspaces/{id}/annotations         list; POST stores GeoJSON
///   GET  /workspaces/{id}/annotations/{n}     verbatim GeoJSON
///   GET  /workspaces/{id}/annotations/{n}/boundaries
///   GET  /workspaces/{id}/results/{n}/{file}
///
/// Errors are JSON {status, code, message[, field]}.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the configured host and port and serves until stop().
  bool listen();
  /// Binds an ephemeral port on `host` and returns it; then call serve().
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool serve();
  void stop();
  void wait_until_ready() const;

  /// Number of guidance computations actually run (not served from cache).
  std::size_t guidance_computations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sbss
