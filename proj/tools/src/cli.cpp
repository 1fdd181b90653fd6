#include "sbss/cli.hpp"

#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sbss/csv.hpp"
#include "sbss/error.hpp"
#include "sbss/export.hpp"
#include "sbss/guidance.hpp"
#include "sbss/metrics.hpp"
#include "sbss/sbss.hpp"
#include "sbss/serialize.hpp"
#include "sbss/workspace.hpp"

namespace sbss {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numeric:
      return 3;
    case ErrorKind::io:
      return 4;
    default:
      return 2;
  }
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

void print_metrics(std::ostream& out, const SettingMetrics& m, const KernelConfig& kernel) {
  out << std::left << std::setw(10) << "region" << std::setw(8) << "count" << std::setw(6)
      << "flag" << std::setw(14) << "cov_diff";
  for (std::size_t r = 0; r < kernel.rings.size(); ++r) {
    out << std::setw(14) << ("ring_" + std::to_string(r + 1));
  }
  out << "kernel\n";
  for (std::size_t k = 0; k < m.regions.size(); ++k) {
    const auto& rc = m.regions[k];
    const auto& kc = m.kernels[k];
    out << std::setw(10) << rc.id << std::setw(8) << rc.count << std::setw(6)
        << (rc.flagged ? "LOW" : "ok") << std::setw(14) << cell(m.cov_diff[k]);
    for (std::size_t r = 0; r < kernel.rings.size(); ++r) {
      out << std::setw(14) << (cell(kc.ring_means[r]) + (kc.ring_flagged[r] ? " LOW" : ""));
    }
    out << cell(kc.config_mean) << (kc.config_flagged ? " LOW" : "") << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SBSS parameter-selection workbench"};
  app.require_subcommand(1);

  std::string csv_path, x_col, y_col, workspace_dir, setting_path, out_dir;
  bool lonlat = false, force = false, as_json = false, experimental = false;
  std::string format = "csv", normalization = "locations";
  GuidanceParams params;
  std::optional<double> max_radius, max_lag;
  double threshold = kDefaultThreshold;

  auto* ingest = app.add_subcommand("ingest", "Create a workspace from a CSV file");
  ingest->add_option("csv", csv_path, "Input CSV (header row required)")->required();
  ingest->add_option("--x", x_col, "X or longitude column")->required();
  ingest->add_option("--y", y_col, "Y or latitude column")->required();
  ingest->add_flag("--lonlat", lonlat, "Coordinates are degrees; project to meters");
  ingest->add_option("--workspace", workspace_dir, "Workspace directory")->required();
  ingest->add_flag("--force", force, "Replace an existing workspace");

  auto* suggest = app.add_subcommand("suggest", "Precompute guidance into guidance.json");
  suggest->add_option("--workspace", workspace_dir)->required();
  suggest->add_option("--grid-max", params.grid_max, "Largest grid side")->capture_default_str();
  suggest->add_option("--k-min", params.k_min)->capture_default_str();
  suggest->add_option("--k-max", params.k_max)->capture_default_str();
  suggest->add_option("--kernel-depth", params.kernel_depth)->capture_default_str();
  suggest->add_option("--max-radius", max_radius, "Default: 25th distance percentile");
  suggest->add_option("--threshold", params.threshold)->capture_default_str();
  suggest->add_option("--variogram-bins", params.variogram_bins)->capture_default_str();
  suggest->add_option("--max-lag", max_lag, "Default: half the largest distance");

  auto* metrics = app.add_subcommand("metrics", "Metric table for a parameter setting");
  metrics->add_option("--workspace", workspace_dir)->required();
  metrics->add_option("--setting", setting_path, "Setting JSON file")->required();
  metrics->add_option("--threshold", threshold)->capture_default_str();
  metrics->add_flag("--json", as_json, "Print JSON instead of a table");
  metrics->add_flag("--experimental", experimental, "Include eigenvalue differences");

  auto* run = app.add_subcommand("run", "Estimate W and export the result");
  run->add_option("--workspace", workspace_dir)->required();
  run->add_option("--setting", setting_path)->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"locations", "pairs"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const SpatialDataset ds = ingest_csv(csv_path, x_col, y_col,
                                           lonlat ? CoordinateKind::lonlat : CoordinateKind::planar);
      Workspace::create(workspace_dir, ds, force);
      out << "workspace " << workspace_dir << ": " << ds.size() << " locations, "
          << ds.dimension() << " variables\n";
    } else if (*suggest) {
      const Workspace ws = Workspace::open(workspace_dir);
      params.max_radius = max_radius;
      params.max_lag = max_lag;
      const GuidanceBundle bundle = compute_guidance(ws.dataset(), params);
      ws.store_guidance(guidance_to_json(bundle, ws.dataset().variable_names()).dump(2) + "\n");
      out << "guidance.json: " << bundle.regionalizations.size() << " regionalizations, "
          << bundle.kernel_suggestions.size() << " kernel suggestions\n";
    } else if (*metrics) {
      const Workspace ws = Workspace::open(workspace_dir);
      const ParameterSetting setting = parse_setting(read_text_file(setting_path));
      const SettingMetrics m = setting_metrics(ws.dataset(), setting, threshold, experimental);
      if (as_json) {
        out << metrics_to_json(m, setting.kernel).dump(2) << "\n";
      } else {
        print_metrics(out, m, setting.kernel);
      }
    } else if (*run) {
      const Workspace ws = Workspace::open(workspace_dir);
      const ParameterSetting setting = parse_setting(read_text_file(setting_path));
      SbssOptions options;
      options.normalization =
          normalization == "pairs" ? LocalNormalization::pairs : LocalNormalization::locations;
      const SbssResult result = run_sbss(ws.dataset(), setting, options);
      const auto files = export_result(result, out_dir,
                                       format == "json" ? ExportFormat::json : ExportFormat::csv);
      out << "wrote";
      for (const auto& f : files) out << " " << f;
      out << " to " << out_dir << (result.converged ? "" : " (diagonalization not converged)")
          << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " [at " << e.field() << "]";
    err << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sbss
