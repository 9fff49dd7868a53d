// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bgmark/clock.hpp"
#include "bgmark/edit_script.hpp"

namespace bgmark {

/// The editable document. modified is true iff the content changed since the
/// last successful save.
struct DocumentBuffer {
  std::string content;
  bool modified = false;
  std::int64_t target_size_bytes = 0;

  /// Applies one scripted mutation; lengths are clamped to the current
  /// content. Always sets the modified flag (the event is the edit).
  void apply(const EditEvent& event, std::mt19937_64& rng);
};

/// Returns the buffer's modified flag (the change-detection primitive).
bool detect_change(const DocumentBuffer& buffer);

enum class TriggerKind { periodic, idle };

struct TriggerConfig {
  TriggerKind kind = TriggerKind::periodic;
  double interval_s = 10.0;  // period, or idle threshold for the idle kind
};

enum class WriteStrategyKind { direct_sync, temp_rename, backup_overwrite };

enum class LogSink { none, stream, file, both };

const char* to_string(TriggerKind v);
const char* to_string(WriteStrategyKind v);
const char* to_string(LogSink v);
std::optional<TriggerKind> trigger_kind_from(const std::string& s);
std::optional<WriteStrategyKind> write_strategy_from(const std::string& s);
std::optional<LogSink> log_sink_from(const std::string& s);

struct AutosaveConfig {
  TriggerConfig trigger;
  WriteStrategyKind strategy = WriteStrategyKind::direct_sync;
  bool change_detection = false;
  LogSink logging = LogSink::none;
  std::filesystem::path target_path;
  int save_budget = 12;      // trigger firings to execute
  double max_session_s = 0;  // 0: derived bound (script + 4 x budget x interval + 30)
};

/// What a single save touched.
struct SaveReceipt {
  std::uint64_t bytes_written = 0;  // bytes of document content in the target
  std::vector<std::filesystem::path> files_touched;
};

/// Test hook: abort a temp_rename save after the temp write, before rename.
enum class SaveFailure { none, before_rename };

/// Writes buffer.content to target_path using the given strategy:
///  - direct_sync: in-place write + fsync before returning
///  - temp_rename: sibling `<target>.tmp.<nonce>` + fsync + atomic rename;
///    no temp remains on success, and on failure the target is untouched
///  - backup_overwrite: prior target copied to `<target>.bak`, then overwrite
/// Throws SessionError on I/O failure.
SaveReceipt perform_save(WriteStrategyKind strategy, const DocumentBuffer& buffer,
                         const std::filesystem::path& target_path,
                         SaveFailure inject = SaveFailure::none);

/// One line per trigger firing: `<t_s>\t<index>\t<saved|skipped>\t<bytes>`.
struct SaveLogRecord {
  double t_s = 0;
  int firing_index = 0;
  bool saved = false;
  std::uint64_t bytes = 0;
};

/// Appends the record to the configured sinks; the file sink flushes per
/// record. Returns false when a file sink write failed (session continues).
bool emit_log(LogSink sink, const SaveLogRecord& record, std::ostream* stream_sink,
              std::ostream* file_sink);

struct SessionStats {
  int trigger_firings = 0;
  int saves_performed = 0;
  int saves_skipped = 0;
  std::uint64_t bytes_written = 0;
  int log_records = 0;
  int log_errors = 0;
  double wall_time_s = 0;
  std::vector<double> firing_times_s;  // session-relative, one per firing
};

/// Optional session instrumentation.
struct SessionHooks {
  std::function<void()> on_save;          // after each performed save (charge hook)
  std::function<void(double)> on_tick;    // periodic sampling callback (t_s)
  double tick_period_s = 0;               // 0 disables on_tick
  std::ostream* stream_sink = nullptr;    // null: std::cerr
  std::function<bool()> cancelled;        // cooperative interrupt poll
  bool autosave_enabled = true;           // false: control session (edits only)
  SaveFailure inject_failure = SaveFailure::none;
};

/// Replays the edit script and the trigger schedule on one logical timeline
/// (edits win ties) until save_budget firings occurred — or, for control
/// sessions, until save_budget x interval_s elapsed. Idle triggers fire when
/// neither an edit nor a firing happened for interval_s.
/// Throws SessionError on unwritable targets or when the trigger cannot reach
/// its budget within the session bound; InterruptedError when cancelled.
SessionStats run_autosave_session(const AutosaveConfig& config, const EditScript& script,
                                  Clock& clock, const SessionHooks& hooks = {});

}  // namespace bgmark
