// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bgmark/autosave.hpp"
#include "bgmark/energy_provider.hpp"

namespace bgmark {

/// Identity of one run within a plan expansion.
struct RunCoordinates {
  std::string workload;
  std::string variant;  // "control" for control runs
  std::int64_t file_size_bytes = 0;
  int repetition = 0;
  bool is_control = false;

  /// Stable slug, e.g. "mu.base.5120.r04".
  std::string id() const;

  friend bool operator==(const RunCoordinates&, const RunCoordinates&) = default;
  auto key() const { return std::tie(workload, variant, file_size_bytes, repetition); }
  friend bool operator<(const RunCoordinates& a, const RunCoordinates& b) {
    return a.key() < b.key();
  }
};

/// One measured cycle: energy window + session observables.
struct MeasurementRecord {
  RunCoordinates coords;
  EnergyWindow energy;
  SessionStats stats;
  std::string started_at;  // ISO-8601 UTC
  bool ok = true;
};

/// Wall-clock timestamp for record provenance.
std::string iso8601_utc_now();

inline constexpr const char* kStoreHeader =
    "run_id,workload,variant,file_size_bytes,repetition,is_control,domain,joules,"
    "duration_s,trigger_firings,saves_performed,saves_skipped,bytes_written,"
    "log_records,started_at,status";

/// Append-only CSV of measurement records: one row per energy domain plus a
/// `total` row per record. Loading reconstructs records and rejects malformed
/// rows with their line number (a torn final line from an interrupted append
/// is dropped instead).
class RunStore {
 public:
  /// Opens for appending, writing the header first when the file is new.
  explicit RunStore(std::filesystem::path csv_path);

  /// Persists one record (all rows) and flushes.
  void append(const MeasurementRecord& record);

  const std::filesystem::path& path() const { return path_; }

  static std::vector<MeasurementRecord> load(const std::filesystem::path& csv_path);

  /// Atomically replaces the store's contents (temp file + rename).
  static void rewrite(const std::filesystem::path& csv_path,
                      const std::vector<MeasurementRecord>& records);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace bgmark
