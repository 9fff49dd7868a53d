// SPDX-License-Identifier: Apache-2.0
#include "bgmark/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "bgmark/errors.hpp"

namespace bgmark {

GroupedStore group_records(const std::vector<MeasurementRecord>& records,
                           bool apply_iqr_filter) {
  GroupedStore grouped;
  grouped.records_total = static_cast<int>(records.size());
  for (const auto& rec : records) {
    if (!rec.ok) {
      grouped.records_failed++;
      continue;
    }
    const double total = rec.energy.total_joules();
    if (rec.coords.is_control) {
      grouped.control_totals[{rec.coords.workload, rec.coords.file_size_bytes}].push_back(
          total);
    } else {
      grouped
          .scenario_totals[{rec.coords.workload, rec.coords.variant,
                            rec.coords.file_size_bytes}]
          .push_back(total);
    }
  }
  if (apply_iqr_filter) {
    for (auto& [key, values] : grouped.scenario_totals) values = iqr_filter(values);
    for (auto& [key, values] : grouped.control_totals) values = iqr_filter(values);
  }
  return grouped;
}

double control_mean_for(const GroupedStore& grouped, const ScenarioKey& scenario) {
  auto exact = grouped.control_totals.find({scenario.workload, scenario.file_size_bytes});
  if (exact != grouped.control_totals.end() && !exact->second.empty()) {
    return describe(exact->second).mean;
  }
  std::vector<double> pooled;
  for (const auto& [key, values] : grouped.control_totals) {
    if (key.first == scenario.workload) {
      pooled.insert(pooled.end(), values.begin(), values.end());
    }
  }
  if (pooled.empty()) {
    throw ConfigError("no control records for scenario '" + scenario.label() + "' (size " +
                      std::to_string(scenario.file_size_bytes) + ")");
  }
  return describe(pooled).mean;
}

std::vector<DeltaResult> compute_deltas(const GroupedStore& grouped) {
  std::vector<DeltaResult> deltas;
  for (const auto& [scenario, values] : grouped.scenario_totals) {
    if (values.empty()) continue;
    DeltaResult d;
    d.scenario = scenario;
    d.mean_test_j = describe(values).mean;
    d.mean_control_j = control_mean_for(grouped, scenario);
    d.delta_j = d.mean_test_j - d.mean_control_j;
    d.n_test = values.size();

    auto exact = grouped.control_totals.find({scenario.workload, scenario.file_size_bytes});
    if (exact != grouped.control_totals.end() && !exact->second.empty()) {
      d.n_control = exact->second.size();
    } else {
      std::size_t n = 0;
      for (const auto& [key, cvalues] : grouped.control_totals) {
        if (key.first == scenario.workload) n += cvalues.size();
      }
      d.n_control = n;
    }
    deltas.push_back(std::move(d));
  }
  return deltas;
}

PairwiseComparison test_pairwise(const ScenarioKey& a, std::span<const double> values_a,
                                 const ScenarioKey& b, std::span<const double> values_b,
                                 double alpha) {
  if (values_a.size() < 2 || values_b.size() < 2) {
    throw ConfigError("pairwise test needs n >= 2 per group ('" + a.label() + "' vs '" +
                      b.label() + "')");
  }

  auto normal_enough = [](std::span<const double> xs) {
    if (xs.size() < 3) return false;
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (!(*hi > *lo)) return false;  // zero range: Shapiro undefined, not normal
    return shapiro_wilk(xs).p_value > 0.05;
  };

  PairwiseComparison cmp;
  cmp.scenario_a = a;
  cmp.scenario_b = b;
  cmp.file_size_bytes = a.file_size_bytes;

  TestOutcome outcome = (normal_enough(values_a) && normal_enough(values_b))
                            ? welch_t_test(values_a, values_b)
                            : mann_whitney_u(values_a, values_b);
  cmp.p_value = outcome.p_value;
  cmp.test_name = outcome.test_name;
  cmp.all_tied = outcome.all_tied;

  const double mean_a = describe(values_a).mean;
  const double mean_b = describe(values_b).mean;
  cmp.a_higher = mean_a >= mean_b;
  cmp.delta_j = std::fabs(mean_a - mean_b);
  cmp.significant = cmp.p_value < alpha;
  return cmp;
}

HourlyEstimate hourly_from_average(const std::string& workload, double avg_j_total,
                                   int saves, double interval_s) {
  if (saves < 1) throw ConfigError("hourly estimate: saves must be >= 1");
  if (!(interval_s > 0)) throw ConfigError("hourly estimate: interval must be > 0");

  HourlyEstimate e;
  e.workload = workload;
  e.avg_j_total = avg_j_total;
  e.saves = saves;
  e.interval_s = interval_s;
  // Integer centijoules keep the rounded per-save figure and its products
  // exact in binary floating point (0.83 x 120 must print and compare as
  // 99.6, not 99.59999...).
  const auto centi_per_save = static_cast<long long>(std::llround(
      avg_j_total / static_cast<double>(saves) * 100.0));
  e.avg_j_per_save = static_cast<double>(centi_per_save) / 100.0;
  e.calls_per_hr = 3600.0 / interval_s;
  e.joules_per_hr = static_cast<double>(centi_per_save) * e.calls_per_hr / 100.0;
  e.joules_per_hr_unrounded = avg_j_total * 3600.0 / (saves * interval_s);
  return e;
}

HourlyEstimate estimate_hourly(const GroupedStore& grouped, const ScenarioKey& scenario,
                               int saves, double interval_s) {
  auto it = grouped.scenario_totals.find(scenario);
  if (it == grouped.scenario_totals.end() || it->second.empty()) {
    throw ConfigError("hourly estimate: no records for scenario '" + scenario.label() +
                      "'");
  }
  const double control_mean = control_mean_for(grouped, scenario);
  const double avg_delta = describe(it->second).mean - control_mean;
  return hourly_from_average(scenario.workload, avg_delta, saves, interval_s);
}

WhatIfResult frequency_whatif(const HourlyEstimate& estimate, double new_interval_s) {
  if (!(new_interval_s > 0)) throw ConfigError("what-if: new interval must be > 0");
  WhatIfResult r;
  r.workload = estimate.workload;
  r.old_interval_s = estimate.interval_s;
  r.new_interval_s = new_interval_s;
  r.old_joules_per_hr = estimate.joules_per_hr;
  r.new_joules_per_hr = estimate.avg_j_per_save * (3600.0 / new_interval_s);
  r.reduction_fraction =
      estimate.joules_per_hr > 0 ? 1.0 - r.new_joules_per_hr / estimate.joules_per_hr : 0.0;
  return r;
}

AnalysisBundle run_analysis(const std::vector<MeasurementRecord>& records,
                            const ExperimentPlan& plan, const AnalysisOptions& options) {
  AnalysisBundle bundle;
  bundle.options = options;

  GroupedStore grouped = group_records(records, options.iqr_filter);
  bundle.records_total = grouped.records_total;
  bundle.records_failed = grouped.records_failed;
  if (grouped.scenario_totals.empty()) {
    throw ConfigError("analysis: store holds no usable (ok, non-control) records");
  }

  bundle.deltas = compute_deltas(grouped);

  // Delta-adjusted samples: each record total minus its scenario's control
  // mean. All downstream statistics run on these.
  std::map<ScenarioKey, std::vector<double>> adjusted;
  for (const auto& [scenario, values] : grouped.scenario_totals) {
    if (values.empty()) continue;
    const double control_mean = control_mean_for(grouped, scenario);
    std::vector<double> shifted;
    shifted.reserve(values.size());
    for (double v : values) shifted.push_back(v - control_mean);
    adjusted[scenario] = std::move(shifted);
  }

  for (const auto& [scenario, values] : adjusted) {
    ScenarioSummary summary;
    summary.scenario = scenario;
    summary.control_mean_j = control_mean_for(grouped, scenario);
    summary.delta_adjusted = describe(values);
    bundle.summaries.push_back(std::move(summary));

    BoxplotRow row;
    row.scenario = scenario;
    row.box = box_stats(adjusted[scenario]);
    bundle.boxplots.push_back(std::move(row));
  }

  // Pairwise comparisons within each file size only; a cross-size comparison
  // would conflate document size with the feature under test.
  std::vector<ScenarioKey> keys;
  for (const auto& [scenario, values] : adjusted) keys.push_back(scenario);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (keys[i].file_size_bytes != keys[j].file_size_bytes) continue;
      const auto& va = adjusted[keys[i]];
      const auto& vb = adjusted[keys[j]];
      if (va.size() < 2 || vb.size() < 2) continue;
      bundle.pairwise.push_back(
          test_pairwise(keys[i], va, keys[j], vb, options.alpha));
    }
  }
  if (options.holm && !bundle.pairwise.empty()) {
    std::vector<double> ps;
    ps.reserve(bundle.pairwise.size());
    for (const auto& cmp : bundle.pairwise) ps.push_back(cmp.p_value);
    const std::vector<double> adjusted_ps = holm_bonferroni(ps);
    for (std::size_t i = 0; i < bundle.pairwise.size(); ++i) {
      bundle.pairwise[i].p_adjusted = adjusted_ps[i];
      bundle.pairwise[i].significant = adjusted_ps[i] < options.alpha;
    }
  }

  // Hourly table: one row per workload over the full (last) variant, sizes
  // pooled, at the workload's native cadence.
  if (!plan.chain.variants.empty()) {
    const std::string& full_variant = plan.chain.variants.back().name;
    for (const auto& w : plan.workloads) {
      std::vector<double> pooled;
      for (const auto& [scenario, values] : adjusted) {
        if (scenario.workload == w.name && scenario.variant == full_variant) {
          pooled.insert(pooled.end(), values.begin(), values.end());
        }
      }
      if (pooled.empty()) continue;
      bundle.hourly.push_back(hourly_from_average(
          w.name, describe(pooled).mean, w.save_budget, w.hourly_interval_s()));
    }
  }

  for (const auto& spec : plan.analysis.whatifs) {
    auto it = std::find_if(bundle.hourly.begin(), bundle.hourly.end(),
                           [&](const HourlyEstimate& e) { return e.workload == spec.workload; });
    if (it == bundle.hourly.end()) continue;
    bundle.whatifs.push_back(frequency_whatif(*it, spec.new_interval_s));
  }

  return bundle;
}

}  // namespace bgmark
