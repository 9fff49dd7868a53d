// SPDX-License-Identifier: Apache-2.0
#include "bgmark/autosave.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "bgmark/errors.hpp"

namespace bgmark {

void DocumentBuffer::apply(const EditEvent& event, std::mt19937_64& rng) {
  auto draw_byte = [&rng]() { return static_cast<char>('a' + rng() % 26); };
  switch (event.kind) {
    case EditKind::append:
      for (std::uint32_t i = 0; i < event.length; ++i) content.push_back(draw_byte());
      break;
    case EditKind::replace: {
      if (!content.empty() && event.length > 0) {
        std::size_t offset = rng() % content.size();
        std::size_t len = std::min<std::size_t>(event.length, content.size() - offset);
        for (std::size_t i = 0; i < len; ++i) content[offset + i] = draw_byte();
      }
      break;
    }
    case EditKind::erase: {
      std::size_t len = std::min<std::size_t>(event.length, content.size());
      content.erase(content.size() - len);
      break;
    }
  }
  // The mutation event itself marks the buffer dirty, even when the bytes end
  // up identical (editor modification-flag semantics, not content hashing).
  modified = true;
}

bool detect_change(const DocumentBuffer& buffer) { return buffer.modified; }

const char* to_string(TriggerKind v) {
  return v == TriggerKind::periodic ? "periodic" : "idle";
}

const char* to_string(WriteStrategyKind v) {
  switch (v) {
    case WriteStrategyKind::direct_sync: return "direct_sync";
    case WriteStrategyKind::temp_rename: return "temp_rename";
    case WriteStrategyKind::backup_overwrite: return "backup_overwrite";
  }
  return "?";
}

const char* to_string(LogSink v) {
  switch (v) {
    case LogSink::none: return "none";
    case LogSink::stream: return "stream";
    case LogSink::file: return "file";
    case LogSink::both: return "both";
  }
  return "?";
}

std::optional<TriggerKind> trigger_kind_from(const std::string& s) {
  if (s == "periodic") return TriggerKind::periodic;
  if (s == "idle") return TriggerKind::idle;
  return std::nullopt;
}

std::optional<WriteStrategyKind> write_strategy_from(const std::string& s) {
  if (s == "direct_sync") return WriteStrategyKind::direct_sync;
  if (s == "temp_rename") return WriteStrategyKind::temp_rename;
  if (s == "backup_overwrite") return WriteStrategyKind::backup_overwrite;
  return std::nullopt;
}

std::optional<LogSink> log_sink_from(const std::string& s) {
  if (s == "none") return LogSink::none;
  if (s == "stream") return LogSink::stream;
  if (s == "file") return LogSink::file;
  if (s == "both") return LogSink::both;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Write strategies

namespace {

[[noreturn]] void throw_io(const std::string& what, const std::filesystem::path& p) {
  throw SessionError(what + " '" + p.string() + "': " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const std::filesystem::path& p) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      int saved = errno;
      ::close(fd);
      errno = saved;
      throw_io("write failed for", p);
    }
    off += static_cast<std::size_t>(n);
  }
}

void write_file_synced(const std::filesystem::path& p, const std::string& data) {
  int fd = ::open(p.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw_io("cannot open", p);
  write_all(fd, data, p);
  if (::fsync(fd) != 0) {
    int saved = errno;
    ::close(fd);
    errno = saved;
    throw_io("fsync failed for", p);
  }
  if (::close(fd) != 0) throw_io("close failed for", p);
}

std::filesystem::path make_temp_sibling(const std::filesystem::path& target) {
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream name;
  name << target.filename().string() << ".tmp." << ::getpid() << "."
       << counter.fetch_add(1);
  return target.parent_path() / name.str();
}

}  // namespace

SaveReceipt perform_save(WriteStrategyKind strategy, const DocumentBuffer& buffer,
                         const std::filesystem::path& target_path, SaveFailure inject) {
  SaveReceipt receipt;
  receipt.bytes_written = buffer.content.size();

  switch (strategy) {
    case WriteStrategyKind::direct_sync: {
      write_file_synced(target_path, buffer.content);
      receipt.files_touched = {target_path};
      break;
    }
    case WriteStrategyKind::temp_rename: {
      std::filesystem::path temp = make_temp_sibling(target_path);
      write_file_synced(temp, buffer.content);
      if (inject == SaveFailure::before_rename) {
        std::error_code ec;
        std::filesystem::remove(temp, ec);
        throw SessionError("temp_rename: injected failure before rename of '" +
                           temp.string() + "'");
      }
      if (::rename(temp.c_str(), target_path.c_str()) != 0) {
        int saved = errno;
        std::error_code ec;
        std::filesystem::remove(temp, ec);
        errno = saved;
        throw_io("rename failed onto", target_path);
      }
      receipt.files_touched = {temp, target_path};
      break;
    }
    case WriteStrategyKind::backup_overwrite: {
      std::filesystem::path backup(target_path.string() + ".bak");
      std::error_code ec;
      if (std::filesystem::exists(target_path, ec)) {
        std::filesystem::copy_file(target_path, backup,
                                   std::filesystem::copy_options::overwrite_existing, ec);
        if (ec) {
          throw SessionError("backup copy to '" + backup.string() +
                             "' failed: " + ec.message());
        }
        receipt.files_touched.push_back(backup);
      }
      std::ofstream out(target_path, std::ios::binary | std::ios::trunc);
      if (!out) throw_io("cannot open", target_path);
      out.write(buffer.content.data(),
                static_cast<std::streamsize>(buffer.content.size()));
      out.flush();
      if (!out) throw_io("write failed for", target_path);
      receipt.files_touched.push_back(target_path);
      break;
    }
  }
  return receipt;
}

// ---------------------------------------------------------------------------
// Logging

bool emit_log(LogSink sink, const SaveLogRecord& record, std::ostream* stream_sink,
              std::ostream* file_sink) {
  char line[96];
  std::snprintf(line, sizeof(line), "%.3f\t%d\t%s\t%llu\n", record.t_s,
                record.firing_index, record.saved ? "saved" : "skipped",
                static_cast<unsigned long long>(record.bytes));
  bool ok = true;
  if (sink == LogSink::stream || sink == LogSink::both) {
    std::ostream& out = stream_sink ? *stream_sink : std::cerr;
    out << line;
  }
  if (sink == LogSink::file || sink == LogSink::both) {
    if (file_sink == nullptr) {
      ok = false;
    } else {
      (*file_sink) << line;
      file_sink->flush();
      if (!*file_sink) ok = false;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Session driver

SessionStats run_autosave_session(const AutosaveConfig& config, const EditScript& script,
                                  Clock& clock, const SessionHooks& hooks) {
  if (!(config.trigger.interval_s > 0)) {
    throw ConfigError("autosave session: trigger interval must be > 0");
  }
  if (config.save_budget < 1) {
    throw ConfigError("autosave session: save budget must be >= 1");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double interval = config.trigger.interval_s;
  const double script_end = script.events.empty() ? 0.0 : script.events.back().time_s;
  const double bound =
      config.max_session_s > 0
          ? config.max_session_s
          : script_end + 4.0 * config.save_budget * interval + 30.0;
  // Control sessions have no firings to count down; they cover the same span
  // a periodic session would.
  const double control_end = config.save_budget * interval;

  const std::int64_t t0 = clock.now_ns();
  auto to_abs = [t0](double t_s) {
    return t0 + static_cast<std::int64_t>(std::llround(t_s * 1e9));
  };

  SessionStats stats;
  DocumentBuffer buffer;
  std::mt19937_64 replay_rng(script.seed ^ 0x9E3779B97F4A7C15ULL);

  const bool want_file = config.logging == LogSink::file || config.logging == LogSink::both;
  std::ofstream log_file;
  if (want_file) {
    log_file.open(config.target_path.string() + ".log", std::ios::app);
  }

  std::size_t edit_idx = 0;
  double last_activity = 0;  // session start arms the idle timer
  double last_fire = 0;
  int fired = 0;
  double next_tick = hooks.tick_period_s > 0 ? hooks.tick_period_s : kInf;

  for (;;) {
    if (hooks.cancelled && hooks.cancelled()) {
      throw InterruptedError("autosave session cancelled");
    }

    const double next_edit =
        edit_idx < script.events.size() ? script.events[edit_idx].time_s : kInf;
    double next_fire = kInf;
    if (hooks.autosave_enabled) {
      next_fire = config.trigger.kind == TriggerKind::periodic
                      ? (fired + 1) * interval
                      : std::max(last_activity, last_fire) + interval;
    }
    const double next_end = hooks.autosave_enabled ? kInf : control_end;

    const double next_t = std::min({next_edit, next_fire, next_end});
    if (next_t > bound) {
      std::ostringstream msg;
      msg << "autosave session: bound of " << bound << " s exceeded with " << fired
          << "/" << config.save_budget << " firings ("
          << to_string(config.trigger.kind) << " trigger cannot reach its budget)";
      throw SessionError(msg.str());
    }

    while (hooks.on_tick && next_tick <= next_t) {
      clock.sleep_until_ns(to_abs(next_tick));
      hooks.on_tick(next_tick);
      next_tick += hooks.tick_period_s;
    }
    clock.sleep_until_ns(to_abs(next_t));

    // Edits win ties: a save firing at the same instant sees the fresh edit.
    if (next_edit <= next_t && edit_idx < script.events.size()) {
      buffer.apply(script.events[edit_idx], replay_rng);
      last_activity = next_edit;
      ++edit_idx;
      continue;
    }

    if (!hooks.autosave_enabled) break;  // control span complete

    ++fired;
    stats.trigger_firings++;
    stats.firing_times_s.push_back(next_t);

    const bool do_save = !config.change_detection || detect_change(buffer);
    SaveLogRecord record{next_t, fired, do_save, 0};
    if (do_save) {
      SaveReceipt receipt =
          perform_save(config.strategy, buffer, config.target_path, hooks.inject_failure);
      stats.saves_performed++;
      stats.bytes_written += receipt.bytes_written;
      record.bytes = receipt.bytes_written;
      buffer.modified = false;
      if (hooks.on_save) hooks.on_save();
    } else {
      stats.saves_skipped++;
    }

    if (config.logging != LogSink::none) {
      bool ok = emit_log(config.logging, record, hooks.stream_sink,
                         want_file ? &log_file : nullptr);
      stats.log_records++;
      if (!ok) stats.log_errors++;
    }

    last_fire = next_t;
    if (fired >= config.save_budget) break;
  }

  stats.wall_time_s = static_cast<double>(clock.now_ns() - t0) / 1e9;
  return stats;
}

}  // namespace bgmark
