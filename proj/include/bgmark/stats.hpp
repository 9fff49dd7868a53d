// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bgmark {

/// Sample statistics. sd is the n-1 sample deviation; for n < 2 it is
/// reported as 0 with sd_defined = false.
struct Descriptive {
  double mean = 0;
  double median = 0;
  double sd = 0;
  double min = 0;
  double max = 0;
  double q1 = 0;
  double q3 = 0;
  std::size_t n = 0;
  bool sd_defined = false;
};

/// Throws ConfigError on an empty sample.
Descriptive describe(std::span<const double> xs);

/// Linear-interpolation quantile (the "type 7" convention shared by numpy and
/// boxplot tooling). `sorted_xs` must be ascending and non-empty; p in [0,1].
double quantile_linear(std::span<const double> sorted_xs, double p);

/// Tukey box-plot quantities: whiskers reach the most extreme samples inside
/// 1.5 x IQR fences; everything outside is listed as an outlier.
struct BoxStats {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double lo_whisker = 0;
  double hi_whisker = 0;
  std::vector<double> outliers;
  std::size_t n = 0;
};

BoxStats box_stats(std::span<const double> xs);

/// Two-sided test result.
struct TestOutcome {
  std::string test_name;
  double statistic = 0;
  double p_value = 1.0;
  bool all_tied = false;  // Mann-Whitney with zero rank variance
};

/// Welch two-sample t-test (unequal variances, Welch-Satterthwaite df).
/// Requires n >= 2 per group.
TestOutcome welch_t_test(std::span<const double> a, std::span<const double> b);

/// Mann-Whitney U, asymptotic normal approximation with midranks, tie
/// correction and continuity correction. The statistic is U of the first
/// group. Fully tied data yields p = 1 with all_tied set.
TestOutcome mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Shapiro-Wilk normality test (AS R94). Requires 3 <= n <= 5000 and a
/// non-zero sample range; throws ConfigError otherwise.
struct ShapiroResult {
  double w = 0;
  double p_value = 0;
};

ShapiroResult shapiro_wilk(std::span<const double> xs);

/// Holm-Bonferroni step-down adjustment; returns adjusted p-values in the
/// input order.
std::vector<double> holm_bonferroni(const std::vector<double>& p_values);

/// Drops samples outside the 1.5 x IQR fences. Returns the kept values in
/// their original order.
std::vector<double> iqr_filter(std::span<const double> xs);

}  // namespace bgmark
