// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "bgmark/errors.hpp"
#include "bgmark/stats.hpp"

using namespace bgmark;

// Reference values frozen from an independent statistical implementation
// before this module was written. Seed material: default_rng(20260814).
namespace {

const std::vector<double> fx1_a = {15.159, 16.221, 15.899, 15.167, 15.597, 12.652, 12.804,
                                   16.331, 14.598, 14.522, 13.514, 15.146, 15.932, 15.977,
                                   15.354, 15.325, 15.126, 17.093, 12.992, 15.281, 14.426,
                                   16.297, 15.001, 14.336, 15.197, 15.126, 18.516, 17.211,
                                   16.366, 14.814};
const std::vector<double> fx1_b = {15.043, 15.392, 14.783, 14.517, 16.821, 15.107, 17.631,
                                   16.327, 15.006, 16.501, 16.694, 16.915, 16.062, 15.427,
                                   14.496, 15.737, 16.905, 13.839, 16.264, 16.448, 15.596,
                                   14.860, 14.538, 15.857, 14.792, 14.115, 16.567, 15.420,
                                   15.997, 14.102};
const std::vector<double> fx2_a = {10.409, 10.058, 12.187, 9.827,  11.307, 10.247, 11.501,
                                   10.025, 10.746, 9.744,  11.342, 8.593,  9.397,  10.671,
                                   11.683, 10.210, 9.665,  9.925,  11.300, 11.022, 12.050,
                                   10.040, 10.770, 11.110, 11.063, 10.545, 10.008, 9.904,
                                   9.848,  10.006};
const std::vector<double> fx2_b = {13.358, 11.807, 13.135, 13.749, 12.198, 12.719, 12.497,
                                   13.242, 12.871, 12.528, 12.644, 13.765, 13.088, 14.036,
                                   13.908, 10.671, 14.259, 13.288, 13.382, 12.444, 13.101,
                                   12.905, 13.451, 10.058, 11.979, 11.912, 14.371, 13.540,
                                   13.528, 13.183};
const std::vector<double> fx3_a = {4.900, 6.500, 14.400, 6.700, 11.700, 9.500, 6.300, 7.900,
                                   5.200, 8.100, 5.900,  4.900, 5.800,  6.900, 7.600, 7.300,
                                   4.000, 6.600, 4.600,  7.600, 9.600,  3.800, 2.900, 7.400,
                                   4.600, 6.600, 7.000,  2.600, 9.400,  5.700};
const std::vector<double> fx3_b = {5.000,  9.600, 10.000, 8.500,  10.500, 8.200, 10.800,
                                   9.000,  10.600, 8.300, 9.900,  8.200,  13.800, 18.500,
                                   9.000,  7.200, 10.400, 12.900, 11.700, 4.600, 10.200,
                                   8.000,  5.800, 10.800, 7.500,  9.300,  12.000, 5.900,
                                   13.200, 7.400};
const std::vector<double> fx4_a = {3.293, 5.380, 4.776, 4.596, 5.233};
const std::vector<double> fx4_b = {5.725, 5.630, 6.232, 7.433, 6.477, 5.215, 5.630};
const std::vector<double> fx5_a = {7.159, 7.516, 8.000, 7.229, 6.881, 8.677, 6.581, 7.161,
                                   7.527, 8.466, 8.772, 9.071};
const std::vector<double> fx5_b = fx5_a;

constexpr double kOracleTol = 1e-9;

void check_welch(const std::vector<double>& a, const std::vector<double>& b, double t,
                 double p) {
  TestOutcome r = welch_t_test(a, b);
  CHECK(r.test_name == "welch_t");
  CHECK(std::abs(r.statistic - t) <= kOracleTol);
  CHECK(std::abs(r.p_value - p) <= kOracleTol);
}

void check_mwu(const std::vector<double>& a, const std::vector<double>& b, double u1,
               double p) {
  TestOutcome r = mann_whitney_u(a, b);
  CHECK(r.test_name == "mann_whitney_u");
  CHECK(std::abs(r.statistic - u1) <= kOracleTol);
  CHECK(std::abs(r.p_value - p) <= kOracleTol);
}

void check_shapiro(const std::vector<double>& xs, double w, double p, double tol) {
  ShapiroResult r = shapiro_wilk(xs);
  CHECK(std::abs(r.w - w) <= tol);
  CHECK(std::abs(r.p_value - p) <= tol);
}

}  // namespace

TEST_CASE("welch t matches the reference implementation on all fixtures") {
  check_welch(fx1_a, fx1_b, -1.1056660142100354, 0.27373693694174106);
  check_welch(fx2_a, fx2_b, -10.418100097080329, 8.846971800725854e-15);
  check_welch(fx3_a, fx3_b, -4.081805987742061, 0.0001408128061551498);
  check_welch(fx4_a, fx4_b, -3.005971502669248, 0.01664104628618618);
  check_welch(fx5_a, fx5_b, 0.0, 1.0);
}

TEST_CASE("mann-whitney u matches the reference implementation on all fixtures") {
  check_mwu(fx1_a, fx1_b, 385.0, 0.3402817564186502);
  check_mwu(fx2_a, fx2_b, 36.0, 9.745117481363318e-10);
  check_mwu(fx3_a, fx3_b, 179.5, 6.534532073407689e-05);
  check_mwu(fx4_a, fx4_b, 2.0, 0.01467654174928276);
  check_mwu(fx5_a, fx5_b, 72.0, 1.0);
}

TEST_CASE("fully tied samples flag all_tied and p = 1") {
  // identical groups with internal variance: p = 1 but ranks still vary
  TestOutcome r = mann_whitney_u(fx5_a, fx5_b);
  CHECK_FALSE(r.all_tied);
  CHECK(r.p_value == 1.0);
  std::vector<double> c(8, 3.25), d(6, 3.25);
  r = mann_whitney_u(c, d);
  CHECK(r.all_tied);
  CHECK(r.p_value == 1.0);
  TestOutcome w = welch_t_test(c, d);
  CHECK(w.all_tied);
  CHECK(w.p_value == 1.0);
  CHECK(w.statistic == 0.0);
}

TEST_CASE("shapiro-wilk matches the reference implementation") {
  check_shapiro(fx1_a, 0.9608864807127623, 0.3263016720156261, 1e-6);
  check_shapiro(fx1_b, 0.9737677604430091, 0.6464894163683829, 1e-6);
  check_shapiro(fx2_a, 0.9688347054417982, 0.5078026778417083, 1e-6);
  check_shapiro(fx2_b, 0.9211098115021996, 0.02866192923671804, 1e-6);
  check_shapiro(fx3_a, 0.9390462345997569, 0.08573673611480724, 1e-6);
  check_shapiro(fx3_b, 0.9503385526330831, 0.17262635496353407, 1e-6);
  check_shapiro(fx4_a, 0.8687611199891427, 0.26144342443873947, 1e-6);
  check_shapiro(fx4_b, 0.9047574197818952, 0.3607684361012643, 1e-6);
  check_shapiro(fx5_a, 0.9303167626113436, 0.38348147508457414, 1e-6);
  // smallest supported n and a clearly non-normal sample
  check_shapiro({1.0, 2.0, 3.0, 4.0}, 0.9929120069984326, 0.9718770585603881, 1e-6);
  const std::vector<double> expo = {0.130, 1.860, 3.840, 1.100, 3.450, 0.180, 1.880,
                                    0.940, 2.320, 1.810, 3.960, 0.450, 0.320, 0.640,
                                    0.360, 0.050, 1.590, 1.900, 2.920, 2.040, 0.400,
                                    1.900, 2.770, 0.400, 0.770};
  check_shapiro(expo, 0.912448356244747, 0.034577595097542, 1e-6);
}

TEST_CASE("shapiro-wilk rejects unsupported inputs") {
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>(10, 4.0)), ConfigError);
}

TEST_CASE("test symmetry holds over random group pairs") {
  std::mt19937_64 rng(977);
  std::uniform_int_distribution<int> size_dist(2, 40);
  std::uniform_real_distribution<double> value_dist(0.0, 20.0);
  std::uniform_int_distribution<int> quantize(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(size_dist(rng)), b(size_dist(rng));
    bool coarse = quantize(rng) == 1;  // coarse grids force ties
    for (auto& x : a) x = coarse ? std::floor(value_dist(rng)) : value_dist(rng);
    for (auto& x : b) x = coarse ? std::floor(value_dist(rng)) : value_dist(rng);

    TestOutcome wab = welch_t_test(a, b), wba = welch_t_test(b, a);
    CHECK(std::abs(wab.statistic + wba.statistic) <= 1e-12);
    CHECK(std::abs(wab.p_value - wba.p_value) <= 1e-12);
    CHECK(wab.p_value >= 0.0);
    CHECK(wab.p_value <= 1.0);

    TestOutcome uab = mann_whitney_u(a, b), uba = mann_whitney_u(b, a);
    CHECK(std::abs(uab.p_value - uba.p_value) <= 1e-12);
    // U is reported for the first group, so swapped calls complement it
    const double n1n2 = static_cast<double>(a.size()) * static_cast<double>(b.size());
    CHECK(uab.statistic + uba.statistic == n1n2);
    CHECK(uab.p_value >= 0.0);
    CHECK(uab.p_value <= 1.0);
  }
}

TEST_CASE("tests reject samples that are too small") {
  std::vector<double> one = {1.0}, two = {1.0, 2.0}, none;
  CHECK_THROWS_AS(welch_t_test(one, two), ConfigError);   // variance needs n >= 2
  CHECK_THROWS_AS(mann_whitney_u(none, two), ConfigError);  // ranks need n >= 1
  CHECK_NOTHROW(mann_whitney_u(one, two));
}

TEST_CASE("describe and quantiles use linear interpolation") {
  const std::vector<double> qfix = {12.1, 9.8, 14.3, 10.2, 11.7, 13.0,
                                    9.1,  25.4, 10.9, 12.6, 11.2, 10.5};
  Descriptive d = describe(qfix);
  CHECK(d.n == 12);
  CHECK(std::abs(d.mean - 12.566666666666665) <= 1e-12);
  CHECK(std::abs(d.sd - 4.296369150665231) <= 1e-12);
  CHECK(d.min == 9.1);
  CHECK(d.max == 25.4);
  CHECK(std::abs(d.q1 - 10.425) <= 1e-12);
  CHECK(std::abs(d.median - 11.45) <= 1e-12);
  CHECK(std::abs(d.q3 - 12.7) <= 1e-12);

  CHECK_THROWS_AS(describe(std::vector<double>{}), ConfigError);

  Descriptive single = describe(std::vector<double>{5.0});
  CHECK_FALSE(single.sd_defined);
  CHECK(single.sd == 0.0);
  CHECK(single.median == 5.0);

  std::vector<double> sorted = qfix;
  std::sort(sorted.begin(), sorted.end());
  CHECK(quantile_linear(sorted, 0.0) == sorted.front());
  CHECK(quantile_linear(sorted, 1.0) == sorted.back());
}

TEST_CASE("box stats draw tukey whiskers and outliers") {
  const std::vector<double> qfix = {12.1, 9.8, 14.3, 10.2, 11.7, 13.0,
                                    9.1,  25.4, 10.9, 12.6, 11.2, 10.5};
  BoxStats b = box_stats(qfix);
  CHECK(std::abs(b.q1 - 10.425) <= 1e-12);
  CHECK(std::abs(b.median - 11.45) <= 1e-12);
  CHECK(std::abs(b.q3 - 12.7) <= 1e-12);
  CHECK(b.lo_whisker == 9.1);
  CHECK(b.hi_whisker == 14.3);
  REQUIRE(b.outliers.size() == 1);
  CHECK(b.outliers[0] == 25.4);
  CHECK(b.n == 12);
}

TEST_CASE("iqr filter keeps order and drops fence crossers") {
  const std::vector<double> qfix = {12.1, 9.8, 14.3, 10.2, 11.7, 13.0,
                                    9.1,  25.4, 10.9, 12.6, 11.2, 10.5};
  std::vector<double> kept = iqr_filter(qfix);
  CHECK(kept.size() == 11);
  CHECK(std::find(kept.begin(), kept.end(), 25.4) == kept.end());
  CHECK(kept.front() == 12.1);  // original order preserved
  CHECK(kept.back() == 10.5);

  // all-equal data loses nothing
  std::vector<double> flat(6, 2.0);
  CHECK(iqr_filter(flat).size() == 6);
}

TEST_CASE("holm-bonferroni adjusts step-down and preserves order") {
  // hand-worked example: sorted p x (m - k) with a running max, clipped at 1
  std::vector<double> p = {0.01, 0.04, 0.03, 0.005};
  std::vector<double> adj = holm_bonferroni(p);
  REQUIRE(adj.size() == 4);
  CHECK(std::abs(adj[3] - 0.02) <= 1e-15);   // 0.005 * 4
  CHECK(std::abs(adj[0] - 0.03) <= 1e-15);   // 0.01 * 3
  CHECK(std::abs(adj[2] - 0.06) <= 1e-15);   // 0.03 * 2
  CHECK(std::abs(adj[1] - 0.06) <= 1e-15);   // 0.04 * 1 = 0.04 -> running max 0.06
  // monotone in the sorted order and clipped at 1
  std::vector<double> big = {0.6, 0.9, 0.5};
  adj = holm_bonferroni(big);
  for (double v : adj) CHECK(v <= 1.0);
  CHECK(holm_bonferroni({}).empty());
  std::vector<double> single = {0.037};
  CHECK(holm_bonferroni(single)[0] == 0.037);
}
