// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bgmark/analysis.hpp"

namespace bgmark {

/// Fixed-point format trimmed of trailing zeros ("10.30" -> "10.3",
/// "120.00" -> "120"). Table cells use this so round numbers print the way
/// they are quoted.
std::string format_trimmed(double value, int decimals);

/// p-value cell: 6 trimmed decimals; positive values that would vanish at
/// that precision switch to scientific notation.
std::string format_p(double p);

std::string render_delta_csv(const std::vector<DeltaResult>& deltas);
std::string render_pairwise_csv(const std::vector<PairwiseComparison>& comparisons);
std::string render_hourly_csv(const std::vector<HourlyEstimate>& estimates);
std::string render_boxplot_csv(const std::vector<BoxplotRow>& rows);
std::string render_whatif_csv(const std::vector<WhatIfResult>& whatifs);

/// Aligned plain-text rendering of the whole bundle.
std::string render_text_report(const AnalysisBundle& bundle);

struct ReportPaths {
  std::filesystem::path dir;
  std::filesystem::path deltas_csv;
  std::filesystem::path pairwise_csv;
  std::filesystem::path hourly_csv;
  std::filesystem::path boxplot_csv;
  std::filesystem::path whatif_csv;
  std::filesystem::path text;
  std::filesystem::path metadata;
};

/// Writes the full bundle (four table artifacts, what-ifs, text report,
/// metadata) into out_dir. Throws ConfigError on an empty bundle or an
/// unwritable directory.
ReportPaths export_report(const AnalysisBundle& bundle,
                          const std::filesystem::path& out_dir);

}  // namespace bgmark
