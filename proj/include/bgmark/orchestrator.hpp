// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bgmark/energy_provider.hpp"
#include "bgmark/plan.hpp"
#include "bgmark/run_store.hpp"

namespace bgmark {

/// Expands the plan into its run matrix: every workload x variant x size x
/// repetition, plus each control scenario x repetition. Shuffled with
/// plan.seed when randomize_order is set.
/// Throws ConfigError on an empty dimension.
std::vector<RunCoordinates> expand_matrix(const ExperimentPlan& plan);

/// Per-(workload, size, repetition) edit-script seed; variants and their
/// control share the same script so the control delta isolates the feature.
std::uint64_t script_seed(const ExperimentPlan& plan, const RunCoordinates& coords);

struct RunHooks {
  std::function<bool()> interrupted;  // polled between runs and inside sessions
  std::function<bool(const RunCoordinates&)> fail_injector;  // test hook
  std::ostream* progress = nullptr;
  bool in_order = false;                     // disable the seeded shuffle
  std::optional<double> cooldown_override_s;
  bool keep_scratch = false;
};

/// One full measurement cycle: warmup, session arm + settle, start snapshot,
/// session, end snapshot, teardown. The caller persists the record and pays
/// the cooldown. Session failures yield a record flagged failed (best-effort
/// window); provider failures propagate.
MeasurementRecord execute_cycle(const RunCoordinates& coords, const ExperimentPlan& plan,
                                EnergyProvider& provider,
                                const std::filesystem::path& scratch_root,
                                const RunHooks& hooks = {});

struct RunOutcome {
  std::filesystem::path store_path;
  int executed = 0;
  int skipped = 0;  // already present (resume)
  int failed = 0;
  bool interrupted = false;
};

/// Executes every pending run strictly sequentially, appending each record
/// to `<run_dir>/records.csv` immediately. A normalized plan snapshot and an
/// environment fingerprint are written once. Re-invoking with the same
/// run_dir resumes: persisted coordinates are skipped.
/// Throws InterruptedError only if interruption strikes before any cleanup;
/// normally returns with interrupted=true so callers can print the token.
RunOutcome run_plan(const ExperimentPlan& plan, EnergyProvider& provider,
                    const std::filesystem::path& run_dir, const RunHooks& hooks = {});

/// Re-executes failed records in place (atomic store rewrite).
RunOutcome rerun_failed(const ExperimentPlan& plan, EnergyProvider& provider,
                        const std::filesystem::path& run_dir, const RunHooks& hooks = {});

}  // namespace bgmark
