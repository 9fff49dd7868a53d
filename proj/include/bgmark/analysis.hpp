// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "bgmark/plan.hpp"
#include "bgmark/run_store.hpp"
#include "bgmark/stats.hpp"

namespace bgmark {

/// Analysis-level identity of a measured scenario.
struct ScenarioKey {
  std::string workload;
  std::string variant;
  std::int64_t file_size_bytes = 0;

  /// Display label, e.g. "mu change".
  std::string label() const { return workload + " " + variant; }

  friend bool operator==(const ScenarioKey&, const ScenarioKey&) = default;
  auto key() const { return std::tie(workload, variant, file_size_bytes); }
  friend bool operator<(const ScenarioKey& a, const ScenarioKey& b) {
    return a.key() < b.key();
  }
};

/// Per-record total joules grouped for analysis. Failed records are dropped
/// at load; the IQR option additionally drops fence-crossing samples.
struct GroupedStore {
  std::map<ScenarioKey, std::vector<double>> scenario_totals;  // main runs
  std::map<std::pair<std::string, std::int64_t>, std::vector<double>>
      control_totals;  // (workload, size)
  int records_total = 0;
  int records_failed = 0;
};

GroupedStore group_records(const std::vector<MeasurementRecord>& records,
                           bool apply_iqr_filter = false);

/// Control baseline for one scenario: a control with the same (workload,
/// size) wins; otherwise all of the workload's controls pool together.
/// Throws ConfigError naming the scenario when no control exists.
double control_mean_for(const GroupedStore& grouped, const ScenarioKey& scenario);

/// The feature's attributed cost: mean test total minus mean control total.
struct DeltaResult {
  ScenarioKey scenario;
  double mean_test_j = 0;
  double mean_control_j = 0;
  double delta_j = 0;  // always mean_test_j - mean_control_j
  std::size_t n_test = 0;
  std::size_t n_control = 0;
};

std::vector<DeltaResult> compute_deltas(const GroupedStore& grouped);

/// Two-scenario significance comparison over delta-adjusted totals.
struct PairwiseComparison {
  ScenarioKey scenario_a;
  ScenarioKey scenario_b;
  std::int64_t file_size_bytes = 0;
  double p_value = 1.0;
  double p_adjusted = -1;  // Holm-Bonferroni when enabled, else -1
  std::string test_name;
  bool a_higher = true;    // which side used more energy
  double delta_j = 0;      // |mean_a - mean_b|
  bool significant = false;
  bool all_tied = false;

  const ScenarioKey& higher() const { return a_higher ? scenario_a : scenario_b; }
};

/// Normality screen (Shapiro-Wilk at 0.05) routes to Welch when both groups
/// pass, Mann-Whitney U otherwise. Requires n >= 2 per group.
PairwiseComparison test_pairwise(const ScenarioKey& a, std::span<const double> values_a,
                                 const ScenarioKey& b, std::span<const double> values_b,
                                 double alpha = 0.05);

/// Hourly extrapolation: per-save cost is rounded to 2 decimals before the
/// multiplication (the headline numbers quote rounded per-save costs); the
/// unrounded product is carried alongside.
struct HourlyEstimate {
  std::string workload;
  double avg_j_total = 0;
  int saves = 0;
  double avg_j_per_save = 0;  // rounded, 2 decimals
  double interval_s = 0;
  double calls_per_hr = 0;
  double joules_per_hr = 0;            // avg_j_per_save x calls_per_hr
  double joules_per_hr_unrounded = 0;  // avg_j_total x 3600 / (saves x interval_s)
};

/// Pure arithmetic core. Throws ConfigError on saves < 1 or interval <= 0.
HourlyEstimate hourly_from_average(const std::string& workload, double avg_j_total,
                                   int saves, double interval_s);

/// Store-backed variant: average is the delta-adjusted mean of the scenario's
/// records. Throws ConfigError when the scenario has no records.
HourlyEstimate estimate_hourly(const GroupedStore& grouped, const ScenarioKey& scenario,
                               int saves, double interval_s);

/// Holding per-save cost fixed, what does a new trigger interval cost?
struct WhatIfResult {
  std::string workload;
  double old_interval_s = 0;
  double new_interval_s = 0;
  double old_joules_per_hr = 0;
  double new_joules_per_hr = 0;
  double reduction_fraction = 0;  // 1 - new/old
};

WhatIfResult frequency_whatif(const HourlyEstimate& estimate, double new_interval_s);

struct AnalysisOptions {
  double alpha = 0.05;
  bool iqr_filter = false;
  bool holm = false;
};

struct ScenarioSummary {
  ScenarioKey scenario;
  Descriptive delta_adjusted;  // totals minus the scenario's control mean
  double control_mean_j = 0;
};

struct BoxplotRow {
  ScenarioKey scenario;
  BoxStats box;
};

struct AnalysisBundle {
  std::vector<DeltaResult> deltas;
  std::vector<ScenarioSummary> summaries;
  std::vector<PairwiseComparison> pairwise;  // all same-size scenario pairs
  std::vector<HourlyEstimate> hourly;        // full variant, sizes pooled
  std::vector<WhatIfResult> whatifs;
  std::vector<BoxplotRow> boxplots;
  AnalysisOptions options;
  int records_total = 0;
  int records_failed = 0;
};

/// Full pipeline over loaded records, driven by the plan's analysis section.
/// Throws ConfigError when no usable records exist.
AnalysisBundle run_analysis(const std::vector<MeasurementRecord>& records,
                            const ExperimentPlan& plan, const AnalysisOptions& options);

}  // namespace bgmark
