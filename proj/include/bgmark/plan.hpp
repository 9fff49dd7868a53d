// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bgmark/autosave.hpp"
#include "bgmark/energy_provider.hpp"
#include "bgmark/feature_model.hpp"

namespace bgmark {

/// One named workload skeleton: trigger mechanism,
/// write strategy and logging sinks. native_interval_s preserves the
/// skeleton's own cadence for hourly extrapolation when the measured trigger
/// interval is harmonized across workloads; 0 means "same as the trigger".
struct WorkloadTemplate {
  std::string name;
  TriggerConfig trigger;
  WriteStrategyKind strategy = WriteStrategyKind::direct_sync;
  LogSink logging = LogSink::stream;
  int save_budget = 12;
  double native_interval_s = 0;

  double hourly_interval_s() const {
    return native_interval_s > 0 ? native_interval_s : trigger.interval_s;
  }
};

/// Control scenario: the named workload runs its edit script with autosave
/// disabled.
struct ControlSpec {
  std::string workload;
  std::int64_t file_size_bytes = 0;
};

/// Fixed measurement cycle timings (seconds).
struct CycleConfig {
  double warmup_s = 5;
  double cooldown_s = 300;
  double app_settle_s = 5;
  double sample_period_s = 0;  // 0 disables in-window sampling
};

/// Edit-script shape shared by every session in the plan.
struct EditModel {
  double rate_hz = 1.0;
  double append_fraction = 0.8;
};

struct WhatIfSpec {
  std::string workload;
  double new_interval_s = 30;
};

struct AnalysisConfig {
  double alpha = 0.05;
  std::vector<WhatIfSpec> whatifs;
};

struct SessionOverrides {
  double duration_s = 0;     // 0: save_budget x interval per workload
  double max_session_s = 0;  // 0: derived bound
};

/// A fully parsed experiment plan.
struct ExperimentPlan {
  std::string name;
  std::uint64_t seed = 0;
  bool randomize_order = true;
  int repetitions = 1;
  std::vector<std::int64_t> file_sizes_bytes;
  CycleConfig cycle;
  ProviderConfig provider;

  std::string feature_name;
  FeatureProfile profile;
  std::vector<AtomicOperation> operations;
  std::vector<std::string> variant_names;  // optional; defaults per chain rule
  VariantChain chain;                      // built during parsing

  std::vector<WorkloadTemplate> workloads;
  std::vector<ControlSpec> controls;
  EditModel edits;
  SessionOverrides session;
  AnalysisConfig analysis;
  std::string output_root = "bgmark-runs";

  const WorkloadTemplate& workload(const std::string& name) const;
  double session_duration_s(const WorkloadTemplate& w) const {
    return session.duration_s > 0 ? session.duration_s
                                  : w.save_budget * w.trigger.interval_s;
  }
};

/// Parses and validates a plan document. Violations raise ConfigError with
/// the offending field path (unknown keys included).
ExperimentPlan plan_from_json(const nlohmann::json& doc);
ExperimentPlan load_plan(const std::filesystem::path& path);

nlohmann::json plan_to_json(const ExperimentPlan& plan);

}  // namespace bgmark
