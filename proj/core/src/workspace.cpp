#include "sbss/workspace.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <mutex>

#include "sbss/csv.hpp"
#include "sbss/error.hpp"
#include "sbss/serialize.hpp"

namespace fs = std::filesystem;

namespace sbss {

namespace {

std::shared_ptr<std::shared_mutex> lock_for(const fs::path& dir) {
  static std::mutex guard;
  static std::map<std::string, std::weak_ptr<std::shared_mutex>> registry;
  const std::string key = fs::weakly_canonical(dir).string();
  std::lock_guard lock(guard);
  auto& slot = registry[key];
  if (auto existing = slot.lock()) return existing;
  auto created = std::make_shared<std::shared_mutex>();
  slot = created;
  return created;
}

// Numbered entries "NNN<ext>" in ascending order.
std::vector<std::size_t> numbered(const fs::path& dir, std::string_view ext) {
  std::vector<std::size_t> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.size() <= ext.size() || !name.ends_with(ext)) continue;
    const std::string stem = name.substr(0, name.size() - ext.size());
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
    out.push_back(std::stoul(stem));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "unwritable_file", "cannot create " + dir.string());
}

// Writes a new file; never replaces an existing one.
bool write_new(const fs::path& path, std::string_view text) {
  if (fs::exists(path)) return false;
  write_text_file(path, text);
  return true;
}

}  // namespace

std::string padded_index(std::size_t index) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%03zu", index);
  return buf;
}

Workspace::Workspace(fs::path dir, std::shared_ptr<const SpatialDataset> ds)
    : dir_(std::move(dir)), dataset_(std::move(ds)), mutex_(lock_for(dir_)) {}

Workspace Workspace::create(const fs::path& dir, const SpatialDataset& ds, bool force) {
  auto mutex = lock_for(dir);
  std::unique_lock lock(*mutex);
  if (fs::exists(dir / "workspace.json") || fs::exists(dir / "dataset.csv")) {
    if (!force) {
      throw_validation("workspace_exists",
                       "workspace " + dir.string() + " already exists (use --force)");
    }
    for (const char* sub : {"history", "annotations", "results"}) fs::remove_all(dir / sub);
    fs::remove(dir / "guidance.json");
  }
  make_dirs(dir);
  for (const char* sub : {"history", "annotations", "results"}) make_dirs(dir / sub);
  write_text_file(dir / "dataset.csv", dataset_to_csv(ds));
  const json meta = {{"schema_version", kSchemaVersion},
                     {"crs_note", ds.crs_note()},
                     {"locations", ds.size()},
                     {"variables", ds.variable_names()}};
  write_text_file(dir / "workspace.json", meta.dump(2) + "\n");
  return Workspace(dir, std::make_shared<const SpatialDataset>(ds));
}

Workspace Workspace::open(const fs::path& dir) {
  if (!fs::exists(dir / "workspace.json") || !fs::exists(dir / "dataset.csv")) {
    throw Error(ErrorKind::not_found, "unknown_workspace", "no workspace at " + dir.string());
  }
  auto mutex = lock_for(dir);
  std::shared_lock lock(*mutex);
  const json meta = parse_json(read_text_file(dir / "workspace.json"));
  if (meta.value("schema_version", 0) > kSchemaVersion) {
    throw_validation("unsupported_schema_version", "workspace schema is newer than supported");
  }
  const SpatialDataset raw =
      ingest_csv(dir / "dataset.csv", "x", "y", CoordinateKind::planar);
  auto ds = std::make_shared<const SpatialDataset>(
      std::vector<Point>(raw.locations().begin(), raw.locations().end()), raw.variables(),
      raw.variable_names(), meta.value("crs_note", raw.crs_note()));
  return Workspace(dir, std::move(ds));
}

std::optional<std::string> Workspace::guidance_text() const {
  std::shared_lock lock(*mutex_);
  if (!fs::exists(dir_ / "guidance.json")) return std::nullopt;
  return read_text_file(dir_ / "guidance.json");
}

void Workspace::store_guidance(std::string_view text) const {
  std::unique_lock lock(*mutex_);
  write_text_file(dir_ / "guidance.json", text);
}

std::size_t Workspace::append_history(ParameterSetting setting,
                                      std::optional<std::string> result) const {
  if (setting.created_at.empty()) setting.created_at = utc_timestamp();
  json entry = {{"schema_version", kSchemaVersion},
                {"setting", setting_to_json(setting)},
                {"result", result ? json(*result) : json(nullptr)}};
  std::unique_lock lock(*mutex_);
  make_dirs(dir_ / "history");
  const auto existing = numbered(dir_ / "history", ".json");
  std::size_t index = existing.empty() ? 1 : existing.back() + 1;
  entry["index"] = index;
  while (!write_new(dir_ / "history" / (padded_index(index) + ".json"), entry.dump(2) + "\n")) {
    entry["index"] = ++index;
  }
  return index;
}

HistoryEntry Workspace::history_entry(std::size_t index) const {
  const fs::path path = dir_ / "history" / (padded_index(index) + ".json");
  std::string text;
  {
    std::shared_lock lock(*mutex_);
    if (!fs::exists(path)) {
      throw Error(ErrorKind::not_found, "unknown_history_entry",
                  "no history entry " + std::to_string(index));
    }
    text = read_text_file(path);
  }
  const json doc = parse_json(text);
  HistoryEntry out;
  out.index = index;
  out.setting = setting_from_json(doc.at("setting"));
  if (doc.contains("result") && doc["result"].is_string()) out.result = doc["result"];
  return out;
}

std::vector<HistoryEntry> Workspace::history() const {
  std::vector<std::size_t> ids;
  {
    std::shared_lock lock(*mutex_);
    ids = numbered(dir_ / "history", ".json");
  }
  std::vector<HistoryEntry> out;
  for (std::size_t id : ids) out.push_back(history_entry(id));
  return out;
}

std::size_t Workspace::store_annotation(std::string_view geojson) const {
  validate_feature_collection(parse_json(geojson));
  std::unique_lock lock(*mutex_);
  make_dirs(dir_ / "annotations");
  const auto existing = numbered(dir_ / "annotations", ".geojson");
  std::size_t id = existing.empty() ? 1 : existing.back() + 1;
  while (!write_new(dir_ / "annotations" / (padded_index(id) + ".geojson"), geojson)) ++id;
  return id;
}

std::vector<std::size_t> Workspace::annotation_ids() const {
  std::shared_lock lock(*mutex_);
  return numbered(dir_ / "annotations", ".geojson");
}

std::string Workspace::annotation(std::size_t id) const {
  const fs::path path = dir_ / "annotations" / (padded_index(id) + ".geojson");
  std::shared_lock lock(*mutex_);
  if (!fs::exists(path)) {
    throw Error(ErrorKind::not_found, "unknown_annotation", "no annotation " + std::to_string(id));
  }
  return read_text_file(path);
}

fs::path Workspace::reserve_result_dir(std::string& relative) const {
  std::unique_lock lock(*mutex_);
  make_dirs(dir_ / "results");
  std::size_t id = 1;
  for (;; ++id) {
    const fs::path candidate = dir_ / "results" / padded_index(id);
    std::error_code ec;
    if (fs::create_directory(candidate, ec)) {
      relative = "results/" + padded_index(id);
      return candidate;
    }
    if (ec) throw Error(ErrorKind::io, "unwritable_file", "cannot create " + candidate.string());
  }
}

}  // namespace sbss
