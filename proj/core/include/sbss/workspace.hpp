#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sbss/model.hpp"

namespace sbss {

/// One stored history entry. `result` is the workspace-relative directory
/// of the exported SBSS result, when the entry came from a run.
struct HistoryEntry {
  std::size_t index = 0;  // 1-based, insertion order
  ParameterSetting setting;
  std::optional<std::string> result;
};

/// A directory holding one dataset and everything derived from it:
///
///   workspace.json          schema version, coordinate note
///   dataset.csv             planar x, y and the variables
///   guidance.json           last precomputed guidance bundle
///   history/NNN.json        append-only parameter settings
///   annotations/NNN.geojson stored verbatim
///   results/NNN/            exported SBSS results
///
/// Writes to one directory are serialized through a process-wide lock per
/// path; reads take the lock shared.
class Workspace {
 public:
  /// Throws Error(validation, "workspace_exists") if the directory holds a
  /// workspace and `force` is false.
  static Workspace create(const std::filesystem::path& dir, const SpatialDataset& ds,
                          bool force = false);
  /// Throws Error(not_found, "unknown_workspace").
  static Workspace open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const SpatialDataset& dataset() const { return *dataset_; }

  std::optional<std::string> guidance_text() const;
  void store_guidance(std::string_view text) const;

  /// Appends the setting; returns its 1-based index. created_at is filled
  /// in when empty.
  std::size_t append_history(ParameterSetting setting,
                             std::optional<std::string> result = std::nullopt) const;
  std::vector<HistoryEntry> history() const;
  /// Throws Error(not_found, "unknown_history_entry").
  HistoryEntry history_entry(std::size_t index) const;

  /// Validates GeoJSON and stores the text unchanged; returns its id.
  std::size_t store_annotation(std::string_view geojson) const;
  std::vector<std::size_t> annotation_ids() const;
  /// Throws Error(not_found, "unknown_annotation").
  std::string annotation(std::size_t id) const;

  /// Creates and returns a fresh results/NNN directory (relative name in
  /// `relative`).
  std::filesystem::path reserve_result_dir(std::string& relative) const;

  /// Lock shared by every Workspace object for the same directory.
  std::shared_mutex& mutex() const { return *mutex_; }

 private:
  Workspace(std::filesystem::path dir, std::shared_ptr<const SpatialDataset> ds);

  std::filesystem::path dir_;
  std::shared_ptr<const SpatialDataset> dataset_;
  std::shared_ptr<std::shared_mutex> mutex_;
};

/// Zero-padded three-digit index used in file names ("007").
std::string padded_index(std::size_t index);

}  // namespace sbss
