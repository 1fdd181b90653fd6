#include "sbss/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sbss/error.hpp"

namespace sbss {

CsvTable parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw_validation("parse_error", "stray quote on line " + std::to_string(line));
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (quoted) throw_validation("parse_error", "unterminated quoted field");
  if (!field.empty() || field_started || !record.empty()) end_record();

  CsvTable table;
  if (records.empty()) throw_validation("parse_error", "empty CSV input");
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw_validation("parse_error", "row " + std::to_string(r) + " has " +
                                          std::to_string(records[r].size()) +
                                          " fields, header has " +
                                          std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

enum class Cell { ok, missing, invalid };

Cell parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty() || text == "NA" || text == "NaN" || text == "nan") return Cell::missing;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) return Cell::invalid;
  if (!std::isfinite(out)) return Cell::missing;
  return Cell::ok;
}

}  // namespace

Point project_equirectangular(double lon, double lat, double lon0, double lat0) {
  constexpr double rad = std::numbers::pi / 180.0;
  return {kEarthRadius * (lon - lon0) * rad * std::cos(lat0 * rad),
          kEarthRadius * (lat - lat0) * rad};
}

SpatialDataset ingest_csv_text(std::string_view text, const std::string& x_column,
                               const std::string& y_column, CoordinateKind kind) {
  const CsvTable table = parse_csv(text);
  auto column = [&](const std::string& name) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (trim(table.header[c]) == name) return c;
    }
    throw_validation("missing_column", "missing column '" + name + "'", name);
  };
  const std::size_t xc = column(x_column);
  const std::size_t yc = column(y_column);
  if (xc == yc) throw_validation("missing_column", "x and y columns must differ", y_column);
  if (table.rows.size() < 2) {
    throw_validation("too_few_locations", "CSV needs at least 2 data rows");
  }

  std::vector<std::size_t> var_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == xc || c == yc) continue;
    var_cols.push_back(c);
    names.emplace_back(trim(table.header[c]));
  }
  if (var_cols.empty()) throw_validation("no_variables", "CSV has no variable columns");

  const std::size_t n = table.rows.size();
  std::vector<Point> raw(n);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(var_cols.size()));
  std::vector<std::size_t> missing_rows;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    bool missing = false;
    auto read = [&](std::size_t c, double& out) {
      switch (parse_number(row[c], out)) {
        case Cell::ok:
          return;
        case Cell::missing:
          missing = true;
          return;
        case Cell::invalid:
          throw_validation("non_numeric",
                           "non-numeric value '" + row[c] + "' in row " + std::to_string(r + 1) +
                               ", column '" + table.header[c] + "'",
                           table.header[c]);
      }
    };
    read(xc, raw[r].x);
    read(yc, raw[r].y);
    for (std::size_t v = 0; v < var_cols.size(); ++v) {
      double value = 0.0;
      read(var_cols[v], value);
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v)) = value;
    }
    if (missing) missing_rows.push_back(r + 1);
  }
  if (!missing_rows.empty()) {
    std::ostringstream msg;
    msg << "missing values in rows";
    for (std::size_t r : missing_rows) msg << ' ' << r;
    throw_validation("missing_values", msg.str());
  }

  std::string note = "planar coordinates (meters)";
  if (kind == CoordinateKind::lonlat) {
    double lon0 = 0.0, lat0 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (raw[r].x < -180.0 || raw[r].x > 180.0 || raw[r].y < -90.0 || raw[r].y > 90.0) {
        throw_validation("invalid_coordinates",
                         "longitude/latitude out of range in row " + std::to_string(r + 1));
      }
      lon0 += raw[r].x;
      lat0 += raw[r].y;
    }
    lon0 /= static_cast<double>(n);
    lat0 /= static_cast<double>(n);
    for (Point& p : raw) p = project_equirectangular(p.x, p.y, lon0, lat0);
    note = "equirectangular projection of lon/lat about lon0=" + format_number(lon0) +
           " lat0=" + format_number(lat0) + " (R=6371000 m)";
  }
  return SpatialDataset(std::move(raw), std::move(values), std::move(names), std::move(note));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "unreadable_file", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "unwritable_file", "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::io, "unwritable_file", "cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "unwritable_file", "cannot write " + path.string());
}

SpatialDataset ingest_csv(const std::filesystem::path& path, const std::string& x_column,
                          const std::string& y_column, CoordinateKind kind) {
  return ingest_csv_text(read_text_file(path), x_column, y_column, kind);
}

std::string dataset_to_csv(const SpatialDataset& ds) {
  std::string out = "x,y";
  for (const auto& name : ds.variable_names()) out += "," + csv_field(name);
  out += "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += format_number(ds.locations()[i].x);
    out += ",";
    out += format_number(ds.locations()[i].y);
    for (Eigen::Index v = 0; v < ds.variables().cols(); ++v) {
      out += ",";
      out += format_number(ds.variables()(static_cast<Eigen::Index>(i), v));
    }
    out += "\n";
  }
  return out;
}

}  // namespace sbss
