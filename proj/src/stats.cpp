// SPDX-License-Identifier: Apache-2.0
#include "bgmark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "bgmark/errors.hpp"

namespace bgmark {

namespace {

double sample_mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

double normal_sf(double z) {
  static const boost::math::normal_distribution<double> unit(0.0, 1.0);
  return boost::math::cdf(boost::math::complement(unit, z));
}

}  // namespace

double quantile_linear(std::span<const double> sorted_xs, double p) {
  if (sorted_xs.empty()) throw ConfigError("quantile: empty sample");
  if (!(p >= 0) || p > 1) throw ConfigError("quantile: p outside [0, 1]");
  const std::size_t n = sorted_xs.size();
  if (n == 1) return sorted_xs[0];
  double h = p * static_cast<double>(n - 1);
  auto lo = static_cast<std::size_t>(h);
  if (lo >= n - 1) return sorted_xs[n - 1];
  double frac = h - static_cast<double>(lo);
  return sorted_xs[lo] + frac * (sorted_xs[lo + 1] - sorted_xs[lo]);
}

Descriptive describe(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("describe: empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());

  Descriptive d;
  d.n = xs.size();
  d.mean = sample_mean(xs);
  d.min = sorted.front();
  d.max = sorted.back();
  d.median = quantile_linear(sorted, 0.5);
  d.q1 = quantile_linear(sorted, 0.25);
  d.q3 = quantile_linear(sorted, 0.75);
  if (d.n >= 2) {
    d.sd = std::sqrt(sample_variance(xs, d.mean));
    d.sd_defined = true;
  }
  return d;
}

BoxStats box_stats(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("box_stats: empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());

  BoxStats b;
  b.n = sorted.size();
  b.q1 = quantile_linear(sorted, 0.25);
  b.median = quantile_linear(sorted, 0.5);
  b.q3 = quantile_linear(sorted, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;

  b.lo_whisker = b.q1;
  b.hi_whisker = b.q3;
  bool any_in = false;
  for (double x : sorted) {
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
    } else {
      if (!any_in) {
        b.lo_whisker = x;
        any_in = true;
      }
      b.hi_whisker = x;
    }
  }
  return b;
}

TestOutcome welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw ConfigError("welch_t_test: each group needs n >= 2");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a, ma);
  const double vb = sample_variance(b, mb);

  TestOutcome out;
  out.test_name = "welch_t";
  const double se2 = va / na + vb / nb;
  if (se2 == 0) {
    // Degenerate zero-variance groups; equal means carry no evidence at all,
    // unequal means are trivially separated.
    out.statistic = 0;
    out.p_value = (ma == mb) ? 1.0 : 0.0;
    out.all_tied = (ma == mb);
    return out;
  }
  out.statistic = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1) +
                                 (vb / nb) * (vb / nb) / (nb - 1));
  boost::math::students_t_distribution<double> dist(df);
  out.p_value =
      2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.statistic)));
  return out;
}

TestOutcome mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ConfigError("mann_whitney_u: each group needs n >= 1");
  }
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;

  // Midranks over the pooled sample; first-group membership tagged.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(n);
  for (double x : a) pooled.emplace_back(x, true);
  for (double x : b) pooled.emplace_back(x, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  double rank_sum_a = 0;
  double tie_term = 0;  // sum of t^3 - t over tie groups
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_a += midrank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  const double fn1 = static_cast<double>(n1);
  const double fn2 = static_cast<double>(n2);
  const double fn = static_cast<double>(n);
  const double u1 = rank_sum_a - fn1 * (fn1 + 1.0) / 2.0;
  const double u2 = fn1 * fn2 - u1;

  TestOutcome out;
  out.test_name = "mann_whitney_u";
  out.statistic = u1;

  const double mu = fn1 * fn2 / 2.0;
  const double s2 = fn1 * fn2 / 12.0 * ((fn + 1.0) - tie_term / (fn * (fn - 1.0)));
  if (s2 <= 0) {
    out.p_value = 1.0;
    out.all_tied = true;
    return out;
  }
  // Continuity-corrected two-sided normal approximation on max(U1, U2).
  const double z = (std::max(u1, u2) - mu - 0.5) / std::sqrt(s2);
  out.p_value = std::min(1.0, std::max(0.0, 2.0 * normal_sf(z)));
  return out;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk, AS R94 (Royston 1995) with the asymptotic p-value branches.

namespace {

double poly(const double* c, int nord, double x) {
  double r = c[nord - 1];
  for (int i = nord - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

double normal_ppf(double p) {
  static const boost::math::normal_distribution<double> unit(0.0, 1.0);
  return boost::math::quantile(unit, p);
}

}  // namespace

ShapiroResult shapiro_wilk(std::span<const double> xs) {
  static const double kC1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static const double kC2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static const double kC3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static const double kC4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static const double kC5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static const double kC6[3] = {-0.4803, -0.082676, 0.0030302};
  static const double kG[2] = {-2.273, 0.459};
  static const double kPi6 = 1.90985931710274;   // 6/pi
  static const double kStqr = 1.04719755119660;  // asin(sqrt(3/4))

  const auto n = static_cast<int>(xs.size());
  if (n < 3) throw ConfigError("shapiro_wilk: need n >= 3");
  if (n > 5000) throw ConfigError("shapiro_wilk: n > 5000 unsupported");

  std::vector<double> x(xs.begin(), xs.end());
  std::sort(x.begin(), x.end());
  // Centering by a mid-sample value improves conditioning of the correlation;
  // W itself is location-invariant.
  const double center = x[static_cast<std::size_t>(n) / 2];
  for (double& v : x) v -= center;

  const double range = x[n - 1] - x[0];
  if (!(range > 0)) throw ConfigError("shapiro_wilk: zero sample range");

  const int n2 = n / 2;
  std::vector<double> a(static_cast<std::size_t>(n2));

  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    const double an25 = n + 0.25;
    double summ2 = 0;
    for (int i = 0; i < n2; ++i) {
      a[i] = normal_ppf((i + 1 - 0.375) / an25);
      summ2 += a[i] * a[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    const double a1 = poly(kC1, 6, rsn) - a[0] / ssumm2;
    int i1;
    double fac;
    if (n > 5) {
      i1 = 2;
      const double a2 = -a[1] / ssumm2 + poly(kC2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[0] = a1;
      a[1] = a2;
    } else {
      i1 = 1;
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
      a[0] = a1;
    }
    for (int i = i1; i < n2; ++i) a[i] = -a[i] / fac;
  }

  // W = squared correlation between ordered data and the coefficient vector.
  auto coeff = [&](int i, int j) {
    if (i == j) return 0.0;
    double v = a[static_cast<std::size_t>(std::min(i, j))];
    return i > j ? v : -v;
  };

  double sx = 0;
  for (int i = 0; i < n; ++i) sx += x[i] / range;
  sx /= n;
  double sa = 0;
  for (int i = 0, j = n - 1; i < n; ++i, --j) sa += coeff(i, j);
  sa /= n;

  double ssa = 0, ssx = 0, sax = 0;
  for (int i = 0, j = n - 1; i < n; ++i, --j) {
    const double asa = coeff(i, j) - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  ShapiroResult res;
  res.w = 1.0 - w1;

  if (n == 3) {
    res.p_value = std::clamp(kPi6 * (std::asin(std::sqrt(res.w)) - kStqr), 0.0, 1.0);
    return res;
  }

  double y = std::log(1.0 - res.w);
  const double an = static_cast<double>(n);
  double m, s;
  if (n <= 11) {
    const double gamma = poly(kG, 2, an);
    if (y >= gamma) {
      res.p_value = std::numeric_limits<double>::min();
      return res;
    }
    y = -std::log(gamma - y);
    m = poly(kC3, 4, an);
    s = std::exp(poly(kC4, 4, an));
  } else {
    const double ln_n = std::log(an);
    m = poly(kC5, 4, ln_n);
    s = std::exp(poly(kC6, 3, ln_n));
  }
  res.p_value = normal_sf((y - m) / s);
  return res;
}

std::vector<double> holm_bonferroni(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return p_values[l] < p_values[r]; });

  std::vector<double> adjusted(m);
  double running_max = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double scaled = static_cast<double>(m - k) * p_values[order[k]];
    running_max = std::max(running_max, std::min(1.0, scaled));
    adjusted[order[k]] = running_max;
  }
  return adjusted;
}

std::vector<double> iqr_filter(std::span<const double> xs) {
  if (xs.empty()) return {};
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_linear(sorted, 0.25);
  const double q3 = quantile_linear(sorted, 0.75);
  const double iqr = q3 - q1;
  const double lo = q1 - 1.5 * iqr;
  const double hi = q3 + 1.5 * iqr;

  std::vector<double> kept;
  kept.reserve(xs.size());
  for (double x : xs) {
    if (x >= lo && x <= hi) kept.push_back(x);
  }
  return kept;
}

}  // namespace bgmark
