// SPDX-License-Identifier: Apache-2.0
#include "bgmark/orchestrator.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bgmark/edit_script.hpp"
#include "bgmark/environment.hpp"
#include "bgmark/errors.hpp"

namespace bgmark {

std::vector<RunCoordinates> expand_matrix(const ExperimentPlan& plan) {
  if (plan.workloads.empty()) throw ConfigError("plan: workload list is empty");
  if (plan.chain.variants.empty()) throw ConfigError("plan: variant chain is empty");
  if (plan.file_sizes_bytes.empty()) throw ConfigError("plan: file size list is empty");
  if (plan.repetitions < 1) throw ConfigError("plan: repetitions must be >= 1");

  std::vector<RunCoordinates> runs;
  runs.reserve(plan.workloads.size() * plan.chain.variants.size() *
                   plan.file_sizes_bytes.size() * static_cast<std::size_t>(plan.repetitions) +
               plan.controls.size() * static_cast<std::size_t>(plan.repetitions));
  for (const auto& w : plan.workloads) {
    for (const auto& v : plan.chain.variants) {
      for (auto size : plan.file_sizes_bytes) {
        for (int rep = 0; rep < plan.repetitions; ++rep) {
          runs.push_back(RunCoordinates{w.name, v.name, size, rep, false});
        }
      }
    }
  }
  for (const auto& c : plan.controls) {
    for (int rep = 0; rep < plan.repetitions; ++rep) {
      runs.push_back(RunCoordinates{c.workload, "control", c.file_size_bytes, rep, true});
    }
  }

  if (plan.randomize_order && runs.size() > 1) {
    // Seeded Fisher-Yates; mt19937_64 keeps the order identical across
    // platforms, unlike std::shuffle's unspecified distribution use.
    std::mt19937_64 rng(plan.seed);
    for (std::size_t i = runs.size() - 1; i > 0; --i) {
      std::size_t j = rng() % (i + 1);
      std::swap(runs[i], runs[j]);
    }
  }
  return runs;
}

std::uint64_t script_seed(const ExperimentPlan& plan, const RunCoordinates& coords) {
  // FNV-1a over the identifying coordinates. The variant is deliberately
  // excluded: every variant and the control replay one identical script.
  std::string key = std::to_string(plan.seed) + "|" + coords.workload + "|" +
                    std::to_string(coords.file_size_bytes) + "|" +
                    std::to_string(coords.repetition);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

struct VariantBinding {
  bool change_detection = false;
  bool logging = false;
};

VariantBinding bind_variant(const ExperimentPlan& plan, const std::string& variant_name) {
  for (const auto& v : plan.chain.variants) {
    if (v.name != variant_name) continue;
    VariantBinding b;
    for (const auto& op : v.operations) {
      if (op == "change_detect") b.change_detection = true;
      if (op == "logging") b.logging = true;
    }
    return b;
  }
  throw ConfigError("plan has no variant named '" + variant_name + "'");
}

}  // namespace

MeasurementRecord execute_cycle(const RunCoordinates& coords, const ExperimentPlan& plan,
                                EnergyProvider& provider,
                                const std::filesystem::path& scratch_root,
                                const RunHooks& hooks) {
  const WorkloadTemplate& workload = plan.workload(coords.workload);
  Clock& clock = provider.clock();

  AutosaveConfig config;
  config.trigger = workload.trigger;
  config.strategy = workload.strategy;
  config.save_budget = workload.save_budget;
  config.max_session_s = plan.session.max_session_s;
  if (!coords.is_control) {
    VariantBinding binding = bind_variant(plan, coords.variant);
    config.change_detection = binding.change_detection;
    config.logging = binding.logging ? workload.logging : LogSink::none;
  }

  std::filesystem::path scratch = scratch_root / coords.id();
  std::error_code ec;
  std::filesystem::create_directories(scratch, ec);
  if (ec) {
    throw ConfigError("cannot create scratch directory '" + scratch.string() +
                      "': " + ec.message());
  }
  config.target_path = scratch / "document.txt";

  EditScript script =
      generate_edit_script(script_seed(plan, coords), coords.file_size_bytes,
                           plan.session_duration_s(workload), plan.edits.rate_hz,
                           plan.edits.append_fraction);

  MeasurementRecord record;
  record.coords = coords;
  record.started_at = iso8601_utc_now();

  clock.sleep_for_s(plan.cycle.warmup_s);

  // Session is configured ("armed") before the settle wait, mirroring an app
  // launched and left to idle before profiling starts.
  SessionHooks session_hooks;
  session_hooks.autosave_enabled = !coords.is_control;
  session_hooks.cancelled = hooks.interrupted;
  // The workload's own log stream is a run artifact, not harness output;
  // capture it instead of letting it interleave with progress reporting.
  std::ostringstream stream_log;
  session_hooks.stream_sink = &stream_log;
  if (auto* synthetic = dynamic_cast<SyntheticProvider*>(&provider)) {
    const double cost = synthetic->config().save_cost_j;
    session_hooks.on_save = [synthetic, cost] { synthetic->charge(cost); };
  }
  std::ofstream sample_file;
  if (plan.cycle.sample_period_s > 0) {
    sample_file.open(scratch / "samples.csv");
    sample_file << "t_s,domain,counter_uj\n";
    session_hooks.tick_period_s = plan.cycle.sample_period_s;
    session_hooks.on_tick = [&provider, &sample_file](double t_s) {
      for (const auto& snap : provider.snapshot()) {
        sample_file << t_s << ',' << to_string(snap.domain) << ',' << snap.counter_uj
                    << '\n';
      }
    };
  }

  clock.sleep_for_s(plan.cycle.app_settle_s);

  std::vector<CounterSnapshot> start = provider.snapshot();
  bool failed = false;
  try {
    if (hooks.fail_injector && hooks.fail_injector(coords)) {
      throw SessionError("injected run failure");
    }
    record.stats = run_autosave_session(config, script, clock, session_hooks);
  } catch (const SessionError&) {
    failed = true;
    // Seal a non-empty window so the failed record is still well-formed.
    clock.sleep_for_s(0.001);
  }
  std::vector<CounterSnapshot> end = provider.snapshot();
  record.energy = window_energy(start, end);
  record.ok = !failed;

  if (hooks.keep_scratch) {
    const std::string captured = stream_log.str();
    if (!captured.empty()) {
      std::ofstream out(scratch / "stream.log");
      out << captured;
    }
  } else {
    std::filesystem::remove_all(scratch, ec);
  }
  return record;
}

namespace {

void write_sidecar_once(const std::filesystem::path& path, const std::string& content,
                        const char* what) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string existing((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    if (what == std::string("plan") && existing != content) {
      throw ConfigError("run directory was created from a different plan ('" +
                        path.string() + "' does not match); use a fresh directory");
    }
    return;
  }
  std::ofstream out(path);
  out << content;
}

void progress_line(std::ostream* out, std::size_t index, std::size_t total,
                   const MeasurementRecord& rec) {
  if (!out) return;
  (*out) << '[' << std::setw(4) << index << '/' << total << "] " << std::left
         << std::setw(32) << rec.coords.id() << std::right << std::fixed
         << std::setprecision(3) << std::setw(12) << rec.energy.total_joules() << " J "
         << std::setprecision(2) << std::setw(9) << rec.energy.duration_s << " s  "
         << (rec.ok ? "ok" : "FAILED") << '\n';
  out->flush();
}

}  // namespace

RunOutcome run_plan(const ExperimentPlan& plan, EnergyProvider& provider,
                    const std::filesystem::path& run_dir, const RunHooks& hooks) {
  std::error_code ec;
  std::filesystem::create_directories(run_dir, ec);
  if (ec) {
    throw ConfigError("cannot create run directory '" + run_dir.string() +
                      "': " + ec.message());
  }

  write_sidecar_once(run_dir / "plan.json", plan_to_json(plan).dump(2) + "\n", "plan");
  write_sidecar_once(run_dir / "environment.json",
                     environment_fingerprint(provider.kind()).dump(2) + "\n", "env");

  const std::filesystem::path store_path = run_dir / "records.csv";
  std::set<RunCoordinates> done;
  if (std::filesystem::exists(store_path)) {
    for (const auto& rec : RunStore::load(store_path)) done.insert(rec.coords);
  }

  RunStore store(store_path);
  RunOutcome outcome;
  outcome.store_path = store_path;

  ExperimentPlan effective = plan;
  if (hooks.in_order) effective.randomize_order = false;
  const std::vector<RunCoordinates> runs = expand_matrix(effective);
  const double cooldown_s = hooks.cooldown_override_s.value_or(plan.cycle.cooldown_s);
  const std::filesystem::path scratch_root = run_dir / "scratch";

  std::size_t index = 0;
  for (const auto& coords : runs) {
    ++index;
    if (done.count(coords)) {
      outcome.skipped++;
      continue;
    }
    if (hooks.interrupted && hooks.interrupted()) {
      outcome.interrupted = true;
      return outcome;
    }
    MeasurementRecord record;
    try {
      record = execute_cycle(coords, plan, provider, scratch_root, hooks);
    } catch (const InterruptedError&) {
      outcome.interrupted = true;
      return outcome;
    }
    store.append(record);
    outcome.executed++;
    if (!record.ok) outcome.failed++;
    progress_line(hooks.progress, index, runs.size(), record);
    provider.clock().sleep_for_s(cooldown_s);
  }

  if (!hooks.keep_scratch) std::filesystem::remove_all(scratch_root, ec);
  return outcome;
}

RunOutcome rerun_failed(const ExperimentPlan& plan, EnergyProvider& provider,
                        const std::filesystem::path& run_dir, const RunHooks& hooks) {
  const std::filesystem::path store_path = run_dir / "records.csv";
  std::vector<MeasurementRecord> records = RunStore::load(store_path);

  RunOutcome outcome;
  outcome.store_path = store_path;
  const double cooldown_s = hooks.cooldown_override_s.value_or(plan.cycle.cooldown_s);
  const std::filesystem::path scratch_root = run_dir / "scratch";

  std::size_t index = 0;
  const auto total =
      static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                             [](const MeasurementRecord& r) { return !r.ok; }));
  for (auto& record : records) {
    if (record.ok) continue;
    ++index;
    if (hooks.interrupted && hooks.interrupted()) {
      outcome.interrupted = true;
      break;
    }
    try {
      record = execute_cycle(record.coords, plan, provider, scratch_root, hooks);
    } catch (const InterruptedError&) {
      outcome.interrupted = true;
      break;
    }
    outcome.executed++;
    if (!record.ok) outcome.failed++;
    progress_line(hooks.progress, index, total, record);
    provider.clock().sleep_for_s(cooldown_s);
  }

  RunStore::rewrite(store_path, records);
  if (!hooks.keep_scratch) {
    std::error_code ec;
    std::filesystem::remove_all(scratch_root, ec);
  }
  return outcome;
}

}  // namespace bgmark
