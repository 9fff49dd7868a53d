// SPDX-License-Identifier: Apache-2.0
#include "bgmark/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bgmark/errors.hpp"

namespace bgmark {

std::string format_trimmed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_p(double p) {
  if (p > 0 && p < 5e-7) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1e", p);
    return buf;
  }
  return format_trimmed(p, 6);
}

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

/// Minimal column-aligned text table.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> widths(header_.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
        widths[i] = std::max(widths[i], row[i].size());
      }
    };
    widen(header_);
    for (const auto& row : rows_) widen(row);

    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < widths.size(); ++i) {
        out << std::left << std::setw(static_cast<int>(widths[i]))
            << (i < row.size() ? row[i] : "");
        if (i + 1 < widths.size()) out << "  ";
      }
      out << '\n';
    };
    emit(header_);
    for (std::size_t i = 0; i < widths.size(); ++i) {
      out << std::string(widths[i], '-');
      if (i + 1 < widths.size()) out << "  ";
    }
    out << '\n';
    for (const auto& row : rows_) emit(row);
    return out.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::string render_delta_csv(const std::vector<DeltaResult>& deltas) {
  std::ostringstream out;
  out << "workload,variant,file_size_bytes,n_test,n_control,mean_test_j,mean_control_j,"
         "delta_j\n";
  for (const auto& d : deltas) {
    out << d.scenario.workload << ',' << d.scenario.variant << ','
        << d.scenario.file_size_bytes << ',' << d.n_test << ',' << d.n_control << ','
        << fixed(d.mean_test_j, 6) << ',' << fixed(d.mean_control_j, 6) << ','
        << fixed(d.delta_j, 6) << '\n';
  }
  return out.str();
}

std::string render_pairwise_csv(const std::vector<PairwiseComparison>& comparisons) {
  std::ostringstream out;
  out << "comparison,file_size_bytes,p_value,higher_energy_user,delta_j,test,"
         "significant\n";
  for (const auto& c : comparisons) {
    out << c.scenario_a.label() << " vs " << c.scenario_b.label() << ','
        << c.file_size_bytes << ',' << format_p(c.p_value) << ',' << c.higher().label()
        << ',' << fixed(c.delta_j, 2) << ',' << c.test_name << ','
        << (c.significant ? "yes" : "no") << '\n';
  }
  return out.str();
}

std::string render_hourly_csv(const std::vector<HourlyEstimate>& estimates) {
  std::ostringstream out;
  out << "workload,avg_j_total,saves,avg_j_per_save,interval_s,calls_per_hr,"
         "joules_per_hr,joules_per_hr_unrounded\n";
  for (const auto& e : estimates) {
    out << e.workload << ',' << format_trimmed(e.avg_j_total, 2) << ',' << e.saves << ','
        << format_trimmed(e.avg_j_per_save, 2) << ',' << format_trimmed(e.interval_s, 2)
        << ',' << format_trimmed(e.calls_per_hr, 2) << ','
        << format_trimmed(e.joules_per_hr, 2) << ','
        << fixed(e.joules_per_hr_unrounded, 4) << '\n';
  }
  return out.str();
}

std::string render_boxplot_csv(const std::vector<BoxplotRow>& rows) {
  std::ostringstream out;
  out << "workload,variant,file_size_bytes,n,q1,median,q3,lo_whisker,hi_whisker,"
         "outliers\n";
  for (const auto& r : rows) {
    out << r.scenario.workload << ',' << r.scenario.variant << ','
        << r.scenario.file_size_bytes << ',' << r.box.n << ',' << fixed(r.box.q1, 6) << ','
        << fixed(r.box.median, 6) << ',' << fixed(r.box.q3, 6) << ','
        << fixed(r.box.lo_whisker, 6) << ',' << fixed(r.box.hi_whisker, 6) << ',';
    for (std::size_t i = 0; i < r.box.outliers.size(); ++i) {
      if (i) out << ';';
      out << fixed(r.box.outliers[i], 6);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_whatif_csv(const std::vector<WhatIfResult>& whatifs) {
  std::ostringstream out;
  out << "workload,old_interval_s,new_interval_s,old_joules_per_hr,new_joules_per_hr,"
         "reduction_pct\n";
  for (const auto& w : whatifs) {
    out << w.workload << ',' << format_trimmed(w.old_interval_s, 2) << ','
        << format_trimmed(w.new_interval_s, 2) << ','
        << format_trimmed(w.old_joules_per_hr, 2) << ','
        << format_trimmed(w.new_joules_per_hr, 2) << ','
        << fixed(w.reduction_fraction * 100.0, 1) << '\n';
  }
  return out.str();
}

std::string render_text_report(const AnalysisBundle& bundle) {
  std::ostringstream out;
  out << "Records: " << bundle.records_total << " total, " << bundle.records_failed
      << " failed (excluded)\n";
  out << "Options: alpha=" << format_trimmed(bundle.options.alpha, 4)
      << ", iqr_filter=" << (bundle.options.iqr_filter ? "on" : "off")
      << ", holm=" << (bundle.options.holm ? "on" : "off") << "\n\n";

  out << "Attributed feature cost (mean test - mean control)\n";
  TextTable deltas({"workload", "variant", "size_bytes", "n", "mean_test_j",
                    "mean_control_j", "delta_j"});
  for (const auto& d : bundle.deltas) {
    deltas.add_row({d.scenario.workload, d.scenario.variant,
                    std::to_string(d.scenario.file_size_bytes), std::to_string(d.n_test),
                    fixed(d.mean_test_j, 3), fixed(d.mean_control_j, 3),
                    fixed(d.delta_j, 3)});
  }
  out << deltas.str() << '\n';

  out << "Delta-adjusted distribution per scenario\n";
  TextTable dist({"workload", "variant", "size_bytes", "n", "mean", "sd", "median", "q1",
                  "q3", "min", "max"});
  for (const auto& s : bundle.summaries) {
    const auto& d = s.delta_adjusted;
    dist.add_row({s.scenario.workload, s.scenario.variant,
                  std::to_string(s.scenario.file_size_bytes), std::to_string(d.n),
                  fixed(d.mean, 3), d.sd_defined ? fixed(d.sd, 3) : "n/a",
                  fixed(d.median, 3), fixed(d.q1, 3), fixed(d.q3, 3), fixed(d.min, 3),
                  fixed(d.max, 3)});
  }
  out << dist.str() << '\n';

  out << "Pairwise comparisons (same file size"
      << (bundle.options.holm ? ", Holm-adjusted significance" : "") << ")\n";
  TextTable pw({"comparison", "size_bytes", "p", "test", "higher", "delta_j", "sig"});
  for (const auto& c : bundle.pairwise) {
    pw.add_row({c.scenario_a.label() + " vs " + c.scenario_b.label(),
                std::to_string(c.file_size_bytes),
                c.p_adjusted >= 0 ? format_p(c.p_value) + " (" + format_p(c.p_adjusted) + ")"
                                  : format_p(c.p_value),
                c.test_name, c.higher().label(), fixed(c.delta_j, 2),
                c.significant ? "yes" : "no"});
  }
  out << pw.str() << '\n';

  out << "Hourly extrapolation (full variant, sizes pooled)\n";
  TextTable hourly({"workload", "avg_j", "saves", "j_per_save", "interval_s", "calls_hr",
                    "j_per_hr", "j_per_hr_raw"});
  for (const auto& e : bundle.hourly) {
    hourly.add_row({e.workload, format_trimmed(e.avg_j_total, 2), std::to_string(e.saves),
                    format_trimmed(e.avg_j_per_save, 2), format_trimmed(e.interval_s, 2),
                    format_trimmed(e.calls_per_hr, 2), format_trimmed(e.joules_per_hr, 2),
                    fixed(e.joules_per_hr_unrounded, 4)});
  }
  out << hourly.str() << '\n';

  if (!bundle.whatifs.empty()) {
    out << "Trigger-interval what-ifs (per-save cost held fixed)\n";
    TextTable wi({"workload", "interval", "new_interval", "j_per_hr", "new_j_per_hr",
                  "reduction"});
    for (const auto& w : bundle.whatifs) {
      wi.add_row({w.workload, format_trimmed(w.old_interval_s, 2),
                  format_trimmed(w.new_interval_s, 2),
                  format_trimmed(w.old_joules_per_hr, 2),
                  format_trimmed(w.new_joules_per_hr, 2),
                  fixed(w.reduction_fraction * 100.0, 1) + "%"});
    }
    out << wi.str() << '\n';
  }
  return out.str();
}

ReportPaths export_report(const AnalysisBundle& bundle,
                          const std::filesystem::path& out_dir) {
  if (bundle.deltas.empty() && bundle.pairwise.empty() && bundle.hourly.empty()) {
    throw ConfigError("export_report: nothing to export (empty analysis)");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create report directory '" + out_dir.string() +
                      "': " + ec.message());
  }

  ReportPaths paths;
  paths.dir = out_dir;
  paths.deltas_csv = out_dir / "deltas.csv";
  paths.pairwise_csv = out_dir / "pairwise.csv";
  paths.hourly_csv = out_dir / "hourly.csv";
  paths.boxplot_csv = out_dir / "boxplot.csv";
  paths.whatif_csv = out_dir / "whatif.csv";
  paths.text = out_dir / "report.txt";
  paths.metadata = out_dir / "metadata.json";

  auto write = [](const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw ConfigError("cannot write report file '" + p.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ConfigError("write to report file '" + p.string() + "' failed");
  };

  write(paths.deltas_csv, render_delta_csv(bundle.deltas));
  write(paths.pairwise_csv, render_pairwise_csv(bundle.pairwise));
  write(paths.hourly_csv, render_hourly_csv(bundle.hourly));
  write(paths.boxplot_csv, render_boxplot_csv(bundle.boxplots));
  write(paths.whatif_csv, render_whatif_csv(bundle.whatifs));
  write(paths.text, render_text_report(bundle));

  nlohmann::json meta;
  meta["alpha"] = bundle.options.alpha;
  meta["iqr_filter"] = bundle.options.iqr_filter;
  meta["holm"] = bundle.options.holm;
  meta["records_total"] = bundle.records_total;
  meta["records_failed"] = bundle.records_failed;
  meta["scenarios"] = bundle.summaries.size();
  meta["comparisons"] = bundle.pairwise.size();
  meta["statistics_basis"] = "delta-adjusted totals (record total minus control mean)";
  meta["hourly_basis"] =
      "full-variant delta-adjusted means, sizes pooled, native trigger cadence";
  write(paths.metadata, meta.dump(2) + "\n");

  return paths;
}

}  // namespace bgmark
