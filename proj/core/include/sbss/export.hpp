#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "sbss/sbss.hpp"

namespace sbss {

enum class ExportFormat { csv, json };

/// "component,<variable names...>" then one row per component.
std::string unmixing_csv(const SbssResult& result);
/// "x,y,comp_1..comp_p", one row per location.
std::string scores_csv(const SbssResult& result);
/// Summary plus W; stable key order and 17-digit round-trip numbers.
std::string diagnostics_json(const SbssResult& result);

/// csv: W.csv, scores.csv, diagnostics.json. json: result.json with the
/// summary and the scores. Returns the written file names. Output is
/// byte-identical for identical results.
std::vector<std::string> export_result(const SbssResult& result,
                                       const std::filesystem::path& dir,
                                       ExportFormat format = ExportFormat::csv);

/// Reads W back from a diagnostics or result document.
Eigen::MatrixXd unmixing_from_json(const nlohmann::json& doc);

}  // namespace sbss
