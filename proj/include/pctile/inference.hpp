#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pctile/math.hpp"

namespace pctile {

constexpr double kDefaultAlpha = 0.001;  // the p < .001 convention

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  double df = 0.0;
  double df2 = 0.0;  // second df for two-parameter references (unused: 0)
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  bool significant = false;
  bool degenerate = false;  // e.g. all values identical
  std::string note;
};

inline void finish(TestResult& r, double alpha) {
  r.alpha = alpha;
  r.significant = r.p_value < alpha;
}

// ---- Normality: D'Agostino-Pearson K^2 omnibus --------------------------

// Transformed skewness z (D'Agostino 1970). Requires n >= 8.
inline double skewness_z(std::span<const double> sample) {
  const auto n = static_cast<double>(sample.size());
  const double m2 = math::central_moment(sample, 2);
  const double m3 = math::central_moment(sample, 3);
  const double g1 = m3 / std::pow(m2, 1.5);
  const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  const double t = y / alpha;
  return delta * std::log(t + std::sqrt(t * t + 1.0));
}

// Transformed kurtosis z (Anscombe-Glynn 1983).
inline double kurtosis_z(std::span<const double> sample) {
  const auto n = static_cast<double>(sample.size());
  const double m2 = math::central_moment(sample, 2);
  const double m4 = math::central_moment(sample, 4);
  const double g2 = m4 / (m2 * m2);
  const double mean_b2 = 3.0 * (n - 1.0) / (n + 1.0);
  const double var_b2 = 24.0 * n * (n - 2.0) * (n - 3.0) /
                        ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (g2 - mean_b2) / std::sqrt(var_b2);
  const double sqrt_beta1 =
      6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
      std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a =
      6.0 + 8.0 / sqrt_beta1 *
                (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double term = (1.0 - 2.0 / a) / (1.0 + x * std::sqrt(2.0 / (a - 4.0)));
  const double z = ((1.0 - 2.0 / (9.0 * a)) - std::cbrt(term)) / std::sqrt(2.0 / (9.0 * a));
  return z;
}

// Skewness and kurtosis test for normality: K^2 = z1^2 + z2^2 ~ chi^2(2).
inline TestResult normality_test(std::span<const double> sample,
                                 double alpha = kDefaultAlpha) {
  if (sample.size() < 8)
    throw std::invalid_argument(
        "inference: normality test requires n >= 8, got n = " +
        std::to_string(sample.size()));
  TestResult r;
  r.test_name = "normality";
  const double z1 = skewness_z(sample);
  const double z2 = kurtosis_z(sample);
  r.statistic = z1 * z1 + z2 * z2;
  r.df = 2.0;
  r.p_value = math::chi2_sf(r.statistic, 2.0);
  finish(r, alpha);
  return r;
}

// ---- Kruskal-Wallis H-test ------------------------------------------------

// H with midrank ties and the standard tie correction
// 1 - sum(t^3 - t) / (N^3 - N).
inline TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                 double alpha = kDefaultAlpha) {
  if (groups.size() < 2)
    throw std::invalid_argument("inference: Kruskal-Wallis needs >= 2 groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("inference: empty group");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const auto n = static_cast<double>(pooled.size());
  if (pooled.size() < 3)
    throw std::invalid_argument("inference: Kruskal-Wallis needs total n >= 3");

  TestResult r;
  r.test_name = "kruskal_wallis";
  r.df = static_cast<double>(groups.size() - 1);

  const auto ranks = math::midranks(pooled);
  double h = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rsum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rsum += ranks[offset + i];
    h += rsum * rsum / static_cast<double>(g.size());
    offset += g.size();
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

  // tie correction
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double correction = 1.0 - tie_sum / (n * n * n - n);
  if (correction <= 0.0) {
    // all pooled values identical
    r.statistic = 0.0;
    r.degenerate = true;
    r.p_value = 1.0;
    r.note = "all values identical across groups";
    finish(r, alpha);
    return r;
  }
  r.statistic = h / correction;
  if (std::abs(r.statistic) < 1e-12) r.statistic = 0.0;
  r.p_value = math::chi2_sf(r.statistic, r.df);
  finish(r, alpha);
  return r;
}

// ---- Pairwise two-sample rank tests ---------------------------------------

struct PairwiseComparison {
  std::string group_a;  // later label
  std::string group_b;  // base of the "A vs B" comparison
  double statistic = 0.0;  // z of the rank-sum normal approximation
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  bool significant = false;
};

struct PairwiseTable {
  std::vector<PairwiseComparison> comparisons;
  std::size_t m = 0;  // number of comparisons, k(k-1)/2
  std::string adjustment = "bonferroni";
  double alpha = kDefaultAlpha;
};

// Two-sample Wilcoxon rank-sum / Mann-Whitney with normal approximation and
// tie correction (no continuity correction).
inline PairwiseComparison rank_sum_test(const std::string& name_a,
                                        std::span<const double> a,
                                        const std::string& name_b,
                                        std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("inference: rank test on empty group");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = math::midranks(pooled);
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double r1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
  const double u = r1 - n1 * (n1 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double var =
      n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));

  PairwiseComparison c;
  c.group_a = name_a;
  c.group_b = name_b;
  if (var <= 0.0) {
    c.statistic = 0.0;
    c.raw_p = 1.0;
    return c;
  }
  c.statistic = (u - mu) / std::sqrt(var);
  c.raw_p = math::two_sided_normal_p(c.statistic);
  return c;
}

// All k(k-1)/2 comparisons with Bonferroni-adjusted p-values, ordered by the
// base group: (2 vs 1), (3 vs 1), (4 vs 1), (3 vs 2), ...
inline PairwiseTable pairwise_rank_tests(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& groups, double alpha = kDefaultAlpha) {
  if (groups.size() < 2)
    throw std::invalid_argument("inference: pairwise tests need >= 2 groups");
  if (labels.size() != groups.size())
    throw std::invalid_argument("inference: label/group count mismatch");
  PairwiseTable table;
  const std::size_t k = groups.size();
  table.m = k * (k - 1) / 2;
  table.alpha = alpha;
  for (std::size_t base = 0; base < k; ++base)
    for (std::size_t other = base + 1; other < k; ++other) {
      auto c = rank_sum_test(labels[other], groups[other], labels[base], groups[base]);
      c.adjusted_p = std::min(1.0, static_cast<double>(table.m) * c.raw_p);
      c.significant = c.adjusted_p < alpha;
      table.comparisons.push_back(std::move(c));
    }
  return table;
}

// ---- Chi-square test of independence with cell decomposition --------------

struct ChiSquareDecomposition {
  std::vector<std::vector<double>> observed;       // group x class
  std::vector<std::vector<double>> expected;       // from marginals
  std::vector<std::vector<double>> contributions;  // (O-E)^2 / E
  std::vector<double> row_totals;                  // contribution totals per row
  std::vector<double> column_totals;               // contribution totals per column
};

struct ChiSquareResult {
  TestResult test;
  ChiSquareDecomposition decomposition;
};

inline ChiSquareResult chi_square_independence(
    const std::vector<std::vector<double>>& observed, double alpha = kDefaultAlpha) {
  const std::size_t rows = observed.size();
  if (rows < 2) throw std::invalid_argument("inference: chi-square needs >= 2 rows");
  const std::size_t cols = observed.front().size();
  if (cols < 2) throw std::invalid_argument("inference: chi-square needs >= 2 columns");
  for (const auto& row : observed)
    if (row.size() != cols)
      throw std::invalid_argument("inference: ragged observed matrix");

  std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
  double n = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      rsum[r] += observed[r][c];
      csum[c] += observed[r][c];
      n += observed[r][c];
    }
  for (std::size_t r = 0; r < rows; ++r)
    if (rsum[r] <= 0.0)
      throw std::invalid_argument("inference: empty row margin at index " +
                                  std::to_string(r));
  for (std::size_t c = 0; c < cols; ++c)
    if (csum[c] <= 0.0)
      throw std::invalid_argument("inference: empty column margin at index " +
                                  std::to_string(c));

  ChiSquareResult out;
  auto& d = out.decomposition;
  d.observed = observed;
  d.expected.assign(rows, std::vector<double>(cols, 0.0));
  d.contributions.assign(rows, std::vector<double>(cols, 0.0));
  d.row_totals.assign(rows, 0.0);
  d.column_totals.assign(cols, 0.0);
  double stat = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = rsum[r] * csum[c] / n;
      const double diff = observed[r][c] - e;
      const double contrib = diff * diff / e;
      d.expected[r][c] = e;
      d.contributions[r][c] = contrib;
      d.row_totals[r] += contrib;
      d.column_totals[c] += contrib;
      stat += contrib;
    }
  out.test.test_name = "chi_square_independence";
  out.test.statistic = stat;
  out.test.df = static_cast<double>((rows - 1) * (cols - 1));
  out.test.p_value = math::chi2_sf(stat, out.test.df);
  finish(out.test, alpha);
  return out;
}

}  // namespace pctile
