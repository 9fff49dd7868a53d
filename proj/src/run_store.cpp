// SPDX-License-Identifier: Apache-2.0
#include "bgmark/run_store.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

#include "bgmark/errors.hpp"

namespace bgmark {

std::string RunCoordinates::id() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s.%s.%" PRId64 ".r%02d", workload.c_str(),
                variant.c_str(), file_size_bytes, repetition);
  return buf;
}

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

namespace {

void write_row(std::ostream& out, const MeasurementRecord& r, const std::string& domain,
               double joules) {
  char num[64];
  out << r.coords.id() << ',' << r.coords.workload << ',' << r.coords.variant << ','
      << r.coords.file_size_bytes << ',' << r.coords.repetition << ','
      << (r.coords.is_control ? 1 : 0) << ',' << domain << ',';
  std::snprintf(num, sizeof(num), "%.9f", joules);
  out << num << ',';
  std::snprintf(num, sizeof(num), "%.9f", r.energy.duration_s);
  out << num << ',' << r.stats.trigger_firings << ',' << r.stats.saves_performed << ','
      << r.stats.saves_skipped << ',' << r.stats.bytes_written << ','
      << r.stats.log_records << ',' << r.started_at << ','
      << (r.ok ? "ok" : "failed") << '\n';
}

void write_record(std::ostream& out, const MeasurementRecord& r) {
  for (const auto& [domain, joules] : r.energy.per_domain_joules) {
    write_row(out, r, to_string(domain), joules);
  }
  write_row(out, r, "total", r.energy.total_joules());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

[[noreturn]] void bad_row(std::size_t line_no, const std::string& why) {
  throw StoreError("run store line " + std::to_string(line_no) + ": " + why);
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_row(line_no, std::string("bad ") + what + " value '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_row(line_no, std::string("bad ") + what + " value '" + s + "'");
  }
}

}  // namespace

RunStore::RunStore(std::filesystem::path csv_path) : path_(std::move(csv_path)) {
  bool fresh = !std::filesystem::exists(path_);
  out_.open(path_, std::ios::app);
  if (!out_) throw StoreError("cannot open run store '" + path_.string() + "' for append");
  if (fresh) {
    out_ << kStoreHeader << '\n';
    out_.flush();
  }
}

void RunStore::append(const MeasurementRecord& record) {
  write_record(out_, record);
  out_.flush();
  if (!out_) throw StoreError("write to run store '" + path_.string() + "' failed");
}

std::vector<MeasurementRecord> RunStore::load(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw StoreError("cannot open run store '" + csv_path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw StoreError("run store '" + csv_path.string() + "' is empty");
  }
  ++line_no;
  if (line != kStoreHeader) {
    throw StoreError("run store '" + csv_path.string() + "' line 1: unexpected header");
  }

  // Records accumulate domain rows until their `total` row seals them.
  std::vector<MeasurementRecord> records;
  std::map<std::string, MeasurementRecord> open_records;

  while (std::getline(in, line)) {
    ++line_no;
    // Every complete append ends with a newline; a line that ran into EOF
    // instead is the torn tail of an interrupted write. Drop it.
    if (in.eof()) break;
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 16) {
      bad_row(line_no, "expected 16 fields, got " + std::to_string(f.size()));
    }

    const std::string& run_id = f[0];
    MeasurementRecord& rec = open_records[run_id];
    rec.coords.workload = f[1];
    rec.coords.variant = f[2];
    rec.coords.file_size_bytes = parse_int(f[3], line_no, "file_size_bytes");
    rec.coords.repetition = static_cast<int>(parse_int(f[4], line_no, "repetition"));
    const std::int64_t is_control = parse_int(f[5], line_no, "is_control");
    if (is_control != 0 && is_control != 1) bad_row(line_no, "is_control must be 0 or 1");
    rec.coords.is_control = is_control == 1;

    const std::string& domain_name = f[6];
    const double joules = parse_double(f[7], line_no, "joules");
    if (joules < 0) bad_row(line_no, "negative joules");

    if (domain_name == "total") {
      rec.energy.duration_s = parse_double(f[8], line_no, "duration_s");
      if (!(rec.energy.duration_s > 0)) bad_row(line_no, "duration_s must be > 0");
      rec.stats.trigger_firings =
          static_cast<int>(parse_int(f[9], line_no, "trigger_firings"));
      rec.stats.saves_performed =
          static_cast<int>(parse_int(f[10], line_no, "saves_performed"));
      rec.stats.saves_skipped =
          static_cast<int>(parse_int(f[11], line_no, "saves_skipped"));
      rec.stats.bytes_written =
          static_cast<std::uint64_t>(parse_int(f[12], line_no, "bytes_written"));
      rec.stats.log_records = static_cast<int>(parse_int(f[13], line_no, "log_records"));
      rec.started_at = f[14];
      if (f[15] != "ok" && f[15] != "failed") bad_row(line_no, "bad status '" + f[15] + "'");
      rec.ok = f[15] == "ok";
      if (rec.energy.per_domain_joules.empty()) {
        bad_row(line_no, "total row without any domain rows for " + run_id);
      }
      records.push_back(std::move(rec));
      open_records.erase(run_id);
    } else {
      auto domain = energy_domain_from(domain_name);
      if (!domain) bad_row(line_no, "unknown domain '" + domain_name + "'");
      rec.energy.per_domain_joules[*domain] = joules;
    }
  }
  // Domain rows without a sealing total row (interrupted mid-record) are
  // intentionally dropped; resume will re-execute those runs.
  return records;
}

void RunStore::rewrite(const std::filesystem::path& csv_path,
                       const std::vector<MeasurementRecord>& records) {
  std::filesystem::path temp = csv_path;
  temp += ".rewrite";
  {
    std::ofstream out(temp, std::ios::trunc);
    if (!out) throw StoreError("cannot open '" + temp.string() + "' for rewrite");
    out << kStoreHeader << '\n';
    for (const auto& r : records) write_record(out, r);
    out.flush();
    if (!out) throw StoreError("rewrite of '" + csv_path.string() + "' failed");
  }
  std::filesystem::rename(temp, csv_path);
}

}  // namespace bgmark
