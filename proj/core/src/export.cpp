#include "sbss/export.hpp"

#include "sbss/csv.hpp"
#include "sbss/error.hpp"
#include "sbss/serialize.hpp"

namespace sbss {

std::string unmixing_csv(const SbssResult& result) {
  std::string out = "component";
  for (const auto& name : result.variable_names) out += "," + csv_field(name);
  out += "\n";
  for (Eigen::Index r = 0; r < result.unmixing.rows(); ++r) {
    out += "comp_" + std::to_string(r + 1);
    for (Eigen::Index c = 0; c < result.unmixing.cols(); ++c) {
      out += "," + format_number(result.unmixing(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string scores_csv(const SbssResult& result) {
  std::string out = "x,y";
  for (Eigen::Index c = 0; c < result.latent_scores.cols(); ++c) {
    out += ",comp_" + std::to_string(c + 1);
  }
  out += "\n";
  for (Eigen::Index i = 0; i < result.latent_scores.rows(); ++i) {
    const Point p = result.locations[static_cast<std::size_t>(i)];
    out += format_number(p.x) + "," + format_number(p.y);
    for (Eigen::Index c = 0; c < result.latent_scores.cols(); ++c) {
      out += "," + format_number(result.latent_scores(i, c));
    }
    out += "\n";
  }
  return out;
}

std::string diagnostics_json(const SbssResult& result) {
  return sbss_summary_to_json(result).dump(2) + "\n";
}

std::vector<std::string> export_result(const SbssResult& result,
                                       const std::filesystem::path& dir, ExportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "unwritable_file", "cannot create " + dir.string());
  if (format == ExportFormat::csv) {
    write_text_file(dir / "W.csv", unmixing_csv(result));
    write_text_file(dir / "scores.csv", scores_csv(result));
    write_text_file(dir / "diagnostics.json", diagnostics_json(result));
    return {"W.csv", "scores.csv", "diagnostics.json"};
  }
  json doc = sbss_summary_to_json(result);
  json scores = json::array();
  for (Eigen::Index i = 0; i < result.latent_scores.rows(); ++i) {
    const Point p = result.locations[static_cast<std::size_t>(i)];
    json row = {p.x, p.y};
    for (Eigen::Index c = 0; c < result.latent_scores.cols(); ++c) {
      row.push_back(result.latent_scores(i, c));
    }
    scores.push_back(std::move(row));
  }
  doc["scores"] = std::move(scores);
  write_text_file(dir / "result.json", doc.dump(2) + "\n");
  return {"result.json"};
}

Eigen::MatrixXd unmixing_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("unmixing") || !doc["unmixing"].is_array()) {
    throw_validation("schema_violation", "missing unmixing matrix", "/unmixing");
  }
  const auto& rows = doc["unmixing"];
  const auto p = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd w(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != p) {
      throw_validation("schema_violation", "unmixing matrix must be square",
                       "/unmixing/" + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < p; ++c) w(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return w;
}

}  // namespace sbss
