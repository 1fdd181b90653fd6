#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sbss/model.hpp"

namespace sbss {

inline constexpr double kEarthRadius = 6371000.0;  // meters

enum class CoordinateKind { planar, lonlat };

/// RFC 4180 table: header row plus data rows, all fields as text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws Error(validation, "parse_error") on unbalanced quotes or ragged
/// rows.
CsvTable parse_csv(std::string_view text);

/// Quotes a field if it contains a delimiter, quote or line break.
std::string csv_field(std::string_view field);

/// Shortest exact text: 17 significant digits.
std::string format_number(double value);

/// Builds a dataset from CSV text. Every column other than the two
/// coordinate columns is a variable and must be numeric. Longitude/latitude
/// input is projected with a local equirectangular projection about the
/// centroid.
///
/// Errors (validation): "parse_error", "missing_column" (field = column),
/// "too_few_locations", "missing_values" (lists rows), "non_numeric",
/// "invalid_coordinates", "duplicate_coordinates".
SpatialDataset ingest_csv_text(std::string_view text, const std::string& x_column,
                               const std::string& y_column, CoordinateKind kind);

/// Same, reading the file first (Error(io, "unreadable_file") on failure).
SpatialDataset ingest_csv(const std::filesystem::path& path, const std::string& x_column,
                          const std::string& y_column, CoordinateKind kind);

/// Planar coordinates of lon/lat degrees about (lon0, lat0).
Point project_equirectangular(double lon, double lat, double lon0, double lat0);

/// Writes the dataset as "x,y,<variables...>" with 17 significant digits.
std::string dataset_to_csv(const SpatialDataset& ds);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file and rename.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sbss
