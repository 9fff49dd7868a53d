// SPDX-License-Identifier: Apache-2.0
//
// bgmark: feature-level energy measurement harness for background processes.
// Subcommands: plan, run, analyze, report, env, rerun-failed.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bgmark/analysis.hpp"
#include "bgmark/environment.hpp"
#include "bgmark/errors.hpp"
#include "bgmark/orchestrator.hpp"
#include "bgmark/plan.hpp"
#include "bgmark/report.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void handle_signal(int) { g_interrupted.store(true); }

using namespace bgmark;

std::string utc_stamp_for_dir() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm_utc);
  return buf;
}

std::string humanize_seconds(double seconds) {
  auto total = static_cast<long long>(seconds + 0.5);
  long long h = total / 3600;
  long long m = (total % 3600) / 60;
  long long s = total % 60;
  std::ostringstream out;
  if (h > 0) out << h << "h";
  if (h > 0 || m > 0) out << m << "m";
  out << s << "s";
  return out.str();
}

struct PlanExpansionSummary {
  std::size_t main_runs = 0;
  std::size_t control_runs = 0;
  double estimated_seconds = 0;
};

PlanExpansionSummary summarize_expansion(const ExperimentPlan& plan) {
  PlanExpansionSummary s;
  s.main_runs = plan.workloads.size() * plan.chain.variants.size() *
                plan.file_sizes_bytes.size() * static_cast<std::size_t>(plan.repetitions);
  s.control_runs = plan.controls.size() * static_cast<std::size_t>(plan.repetitions);
  const double overhead =
      plan.cycle.warmup_s + plan.cycle.app_settle_s + plan.cycle.cooldown_s;
  for (const auto& w : plan.workloads) {
    const double per_run = overhead + plan.session_duration_s(w);
    const double main_runs_for_w = static_cast<double>(
        plan.chain.variants.size() * plan.file_sizes_bytes.size() *
        static_cast<std::size_t>(plan.repetitions));
    s.estimated_seconds += per_run * main_runs_for_w;
    for (const auto& c : plan.controls) {
      if (c.workload == w.name) {
        s.estimated_seconds += per_run * plan.repetitions;
      }
    }
  }
  return s;
}

int cmd_plan(const std::string& plan_file, bool as_json) {
  ExperimentPlan plan = load_plan(plan_file);
  auto runs = expand_matrix(plan);  // validates dimensions
  PlanExpansionSummary s = summarize_expansion(plan);

  if (as_json) {
    nlohmann::json doc;
    doc["name"] = plan.name;
    doc["workloads"] = plan.workloads.size();
    doc["variants"] = plan.chain.variants.size();
    doc["file_sizes"] = plan.file_sizes_bytes.size();
    doc["repetitions"] = plan.repetitions;
    doc["main_runs"] = s.main_runs;
    doc["control_runs"] = s.control_runs;
    doc["total_runs"] = runs.size();
    doc["estimated_seconds"] = s.estimated_seconds;
    doc["provider"] = plan.provider.kind;
    std::cout << doc.dump(2) << '\n';
    return 0;
  }

  std::cout << "Plan: " << plan.name << '\n';
  std::cout << "  workloads:   " << plan.workloads.size() << " (";
  for (std::size_t i = 0; i < plan.workloads.size(); ++i) {
    std::cout << (i ? ", " : "") << plan.workloads[i].name;
  }
  std::cout << ")\n";
  std::cout << "  variants:    " << plan.chain.variants.size() << " (";
  for (std::size_t i = 0; i < plan.chain.variants.size(); ++i) {
    std::cout << (i ? ", " : "") << plan.chain.variants[i].name;
  }
  std::cout << ")\n";
  std::cout << "  file sizes:  " << plan.file_sizes_bytes.size() << " (";
  for (std::size_t i = 0; i < plan.file_sizes_bytes.size(); ++i) {
    std::cout << (i ? ", " : "") << plan.file_sizes_bytes[i];
  }
  std::cout << ")\n";
  std::cout << "  repetitions: " << plan.repetitions << '\n';
  std::cout << "  provider:    " << plan.provider.kind << '\n';
  std::cout << s.main_runs << " main + " << s.control_runs << " control = " << runs.size()
            << " runs\n";
  std::cout << "Estimated wall time: " << humanize_seconds(s.estimated_seconds)
            << " (warmup + settle + session + cooldown per run)\n";
  return 0;
}

std::filesystem::path resolve_output_root(const ExperimentPlan& plan) {
  if (const char* env = std::getenv("BGMARK_OUTPUT_ROOT"); env && *env) return env;
  return plan.output_root;
}

int cmd_run(const std::string& plan_file, const std::string& provider_override,
            const std::string& out_dir, const std::string& resume_dir, bool in_order,
            double cooldown_override, bool has_cooldown_override, bool keep_scratch) {
  ExperimentPlan plan = load_plan(plan_file);
  if (!provider_override.empty()) plan.provider.kind = provider_override;

  std::filesystem::path run_dir;
  if (!resume_dir.empty()) {
    run_dir = resume_dir;
    if (!std::filesystem::is_directory(run_dir)) {
      throw ConfigError("resume directory '" + run_dir.string() + "' does not exist");
    }
  } else if (!out_dir.empty()) {
    run_dir = out_dir;
  } else {
    run_dir = resolve_output_root(plan) / (plan.name + "-" + utc_stamp_for_dir());
  }

  auto provider = open_provider(plan.provider);

  RunHooks hooks;
  hooks.interrupted = [] { return g_interrupted.load(); };
  hooks.progress = &std::cout;
  hooks.in_order = in_order;
  hooks.keep_scratch = keep_scratch;
  if (has_cooldown_override) hooks.cooldown_override_s = cooldown_override;

  std::cout << "Run directory: " << run_dir.string() << '\n';
  RunOutcome outcome = run_plan(plan, *provider, run_dir, hooks);

  if (outcome.interrupted) {
    std::cout << "Interrupted. Resume token: " << run_dir.string() << '\n';
    std::cout << "Resume with: bgmark run " << plan_file << " --resume " << run_dir.string()
              << '\n';
    return 4;
  }
  std::cout << "Store: " << outcome.store_path.string() << '\n';
  std::cout << "Executed " << outcome.executed << ", skipped (already present) "
            << outcome.skipped << ", failed " << outcome.failed << '\n';
  if (outcome.failed > 0) {
    std::cout << "Some runs failed; inspect the store and use `bgmark rerun-failed "
              << run_dir.string() << "`\n";
  }
  return 0;
}

void resolve_store_and_plan(const std::string& target, const std::string& plan_override,
                            std::filesystem::path& store_path,
                            std::filesystem::path& plan_path,
                            std::filesystem::path& base_dir) {
  std::filesystem::path t = target;
  if (std::filesystem::is_directory(t)) {
    base_dir = t;
    store_path = t / "records.csv";
  } else {
    store_path = t;
    base_dir = t.parent_path();
  }
  plan_path = plan_override.empty() ? base_dir / "plan.json"
                                    : std::filesystem::path(plan_override);
  if (!std::filesystem::exists(plan_path)) {
    throw ConfigError("plan snapshot '" + plan_path.string() +
                      "' not found; pass --plan explicitly");
  }
}

AnalysisBundle analyze_target(const std::string& target, const std::string& plan_override,
                              const AnalysisOptions& options,
                              std::filesystem::path& base_dir) {
  std::filesystem::path store_path, plan_path;
  resolve_store_and_plan(target, plan_override, store_path, plan_path, base_dir);
  ExperimentPlan plan = load_plan(plan_path);
  std::vector<MeasurementRecord> records = RunStore::load(store_path);
  return run_analysis(records, plan, options);
}

int cmd_analyze(const std::string& target, const std::string& plan_override,
                const std::string& out_dir, const AnalysisOptions& options) {
  std::filesystem::path base_dir;
  AnalysisBundle bundle = analyze_target(target, plan_override, options, base_dir);
  std::filesystem::path report_dir =
      out_dir.empty() ? base_dir / "report" : std::filesystem::path(out_dir);
  ReportPaths paths = export_report(bundle, report_dir);
  std::cout << "Report bundle: " << paths.dir.string() << '\n';
  std::cout << "  " << paths.deltas_csv.filename().string() << '\n'
            << "  " << paths.pairwise_csv.filename().string() << '\n'
            << "  " << paths.hourly_csv.filename().string() << '\n'
            << "  " << paths.boxplot_csv.filename().string() << '\n'
            << "  " << paths.whatif_csv.filename().string() << '\n'
            << "  " << paths.text.filename().string() << '\n'
            << "  " << paths.metadata.filename().string() << '\n';
  return 0;
}

int cmd_report(const std::string& target, const std::string& plan_override,
               const AnalysisOptions& options) {
  std::filesystem::path base_dir;
  AnalysisBundle bundle = analyze_target(target, plan_override, options, base_dir);
  std::cout << render_text_report(bundle);
  return 0;
}

int cmd_env(bool as_json) {
  EnvironmentReport report = environment_check();
  if (as_json) {
    nlohmann::json doc;
    doc["all_green"] = report.all_green();
    doc["items"] = nlohmann::json::array();
    for (const auto& item : report.items) {
      doc["items"].push_back({{"name", item.name},
                              {"value", item.value},
                              {"warn", item.warn},
                              {"note", item.note}});
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
  }
  for (const auto& item : report.items) {
    std::cout << (item.warn ? "[warn] " : "[ ok ] ") << item.name << ": " << item.value;
    if (!item.note.empty()) std::cout << " (" << item.note << ")";
    std::cout << '\n';
  }
  std::cout << (report.all_green() ? "Environment looks ready."
                                   : "Warnings above; runs are allowed but noisier.")
            << '\n';
  return 0;
}

int cmd_rerun_failed(const std::string& run_dir_arg, const std::string& plan_override,
                     const std::string& provider_override, double cooldown_override,
                     bool has_cooldown_override) {
  std::filesystem::path run_dir = run_dir_arg;
  if (!std::filesystem::is_directory(run_dir)) {
    throw ConfigError("run directory '" + run_dir.string() + "' does not exist");
  }
  std::filesystem::path plan_path =
      plan_override.empty() ? run_dir / "plan.json" : std::filesystem::path(plan_override);
  ExperimentPlan plan = load_plan(plan_path);
  if (!provider_override.empty()) plan.provider.kind = provider_override;

  auto provider = open_provider(plan.provider);
  RunHooks hooks;
  hooks.interrupted = [] { return g_interrupted.load(); };
  hooks.progress = &std::cout;
  if (has_cooldown_override) hooks.cooldown_override_s = cooldown_override;

  RunOutcome outcome = rerun_failed(plan, *provider, run_dir, hooks);
  if (outcome.interrupted) {
    std::cout << "Interrupted. Resume token: " << run_dir.string() << '\n';
    return 4;
  }
  std::cout << "Re-executed " << outcome.executed << " failed runs; " << outcome.failed
            << " failed again\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  CLI::App app{"Feature-level energy measurement harness for background processes"};
  app.require_subcommand(1);

  // plan
  std::string plan_file;
  bool plan_json = false;
  auto* plan_cmd = app.add_subcommand("plan", "Validate a plan and print its expansion");
  plan_cmd->add_option("plan_file", plan_file, "Plan file (JSON)")->required();
  plan_cmd->add_flag("--json", plan_json, "Machine-readable output");

  // run
  std::string run_plan_file, run_provider, run_out, run_resume;
  bool run_in_order = false, run_keep_scratch = false;
  double run_cooldown = 0;
  auto* run_cmd = app.add_subcommand("run", "Execute a plan's measurement matrix");
  run_cmd->add_option("plan_file", run_plan_file, "Plan file (JSON)")->required();
  run_cmd->add_option("--provider", run_provider, "Override the plan's provider kind")
      ->check(CLI::IsMember({"synthetic", "rapl_sysfs"}));
  run_cmd->add_option("--out", run_out, "Run directory (default: output root + timestamp)");
  run_cmd->add_option("--resume", run_resume, "Existing run directory to resume");
  run_cmd->add_flag("--in-order", run_in_order, "Disable the seeded run-order shuffle");
  auto* cooldown_opt = run_cmd->add_option("--cooldown-override", run_cooldown,
                                           "Replace the plan's cooldown_s");
  run_cmd->add_flag("--keep-scratch", run_keep_scratch,
                    "Keep per-run scratch files (targets, logs, samples)");

  // analyze
  std::string an_target, an_plan, an_out;
  AnalysisOptions an_options;
  auto* an_cmd = app.add_subcommand("analyze", "Compute statistics and write the report bundle");
  an_cmd->add_option("store_or_dir", an_target, "Run directory or records.csv")->required();
  an_cmd->add_option("--plan", an_plan, "Plan file (default: plan.json next to the store)");
  an_cmd->add_option("--out", an_out, "Report directory (default: <run_dir>/report)");
  an_cmd->add_option("--alpha", an_options.alpha, "Significance level")
      ->check(CLI::Range(1e-9, 0.999999));
  an_cmd->add_flag("--iqr-filter", an_options.iqr_filter,
                   "Drop samples beyond 1.5 x IQR before analysis");
  an_cmd->add_flag("--holm", an_options.holm, "Holm-Bonferroni correction for pairwise p");

  // report
  std::string rep_target, rep_plan;
  AnalysisOptions rep_options;
  auto* rep_cmd = app.add_subcommand("report", "Print the text report to stdout");
  rep_cmd->add_option("store_or_dir", rep_target, "Run directory or records.csv")->required();
  rep_cmd->add_option("--plan", rep_plan, "Plan file (default: plan.json next to the store)");
  rep_cmd->add_option("--alpha", rep_options.alpha, "Significance level")
      ->check(CLI::Range(1e-9, 0.999999));
  rep_cmd->add_flag("--iqr-filter", rep_options.iqr_filter,
                    "Drop samples beyond 1.5 x IQR before analysis");
  rep_cmd->add_flag("--holm", rep_options.holm, "Holm-Bonferroni correction for pairwise p");

  // env
  bool env_json = false;
  auto* env_cmd = app.add_subcommand("env", "Report measurement readiness (never blocks)");
  env_cmd->add_flag("--json", env_json, "Machine-readable output");

  // rerun-failed
  std::string rr_dir, rr_plan, rr_provider;
  double rr_cooldown = 0;
  auto* rr_cmd = app.add_subcommand("rerun-failed", "Re-execute failed runs in place");
  rr_cmd->add_option("run_dir", rr_dir, "Run directory")->required();
  rr_cmd->add_option("--plan", rr_plan, "Plan file (default: plan.json in the run dir)");
  rr_cmd->add_option("--provider", rr_provider, "Override the plan's provider kind")
      ->check(CLI::IsMember({"synthetic", "rapl_sysfs"}));
  auto* rr_cooldown_opt =
      rr_cmd->add_option("--cooldown-override", rr_cooldown, "Replace the plan's cooldown_s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad invocation is a configuration error
  }

  try {
    if (*plan_cmd) return cmd_plan(plan_file, plan_json);
    if (*run_cmd) {
      return cmd_run(run_plan_file, run_provider, run_out, run_resume, run_in_order,
                     run_cooldown, cooldown_opt->count() > 0, run_keep_scratch);
    }
    if (*an_cmd) return cmd_analyze(an_target, an_plan, an_out, an_options);
    if (*rep_cmd) return cmd_report(rep_target, rep_plan, rep_options);
    if (*env_cmd) return cmd_env(env_json);
    if (*rr_cmd) {
      return cmd_rerun_failed(rr_dir, rr_plan, rr_provider, rr_cooldown,
                              rr_cooldown_opt->count() > 0);
    }
  } catch (const ProviderError& e) {
    std::cerr << "provider error: " << e.what() << '\n';
    return 3;
  } catch (const InterruptedError& e) {
    std::cerr << "interrupted: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const StoreError& e) {
    std::cerr << "store error: " << e.what() << '\n';
    return 2;
  } catch (const SessionError& e) {
    std::cerr << "session error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
