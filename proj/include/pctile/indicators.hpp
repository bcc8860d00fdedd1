#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pctile/math.hpp"
#include "pctile/rank_classes.hpp"

namespace pctile {

enum class CiMethod { wilson, wald };

inline std::string to_string(CiMethod m) {
  return m == CiMethod::wilson ? "wilson" : "wald";
}

struct ProportionCi {
  double share = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  CiMethod method = CiMethod::wilson;
  bool clipped = false;  // Wald interval truncated to [0,1]
};

// I3 = sum over classes of weight * count, with PR6 weights 1 (worst class
// <50%) through 6 (best class 1%).
inline double i3(const RankClassDistribution& dist) {
  if (!dist.scheme || dist.scheme->name != "PR6")
    throw std::invalid_argument("indicators: i3 requires a PR6 distribution");
  const std::size_t k = dist.counts.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    sum += static_cast<double>(i + 1) * static_cast<double>(dist.counts[i]);
  return sum;
}

inline double i3_max(const RankClassDistribution& dist) {
  return static_cast<double>(dist.scheme->classes.size()) *
         static_cast<double>(dist.total);
}

inline ProportionCi proportion_ci(std::size_t successes, std::size_t n, double level,
                                  CiMethod method) {
  if (n == 0) throw std::invalid_argument("indicators: proportion over empty group");
  ProportionCi ci;
  ci.level = level;
  ci.method = method;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  ci.share = p;
  const double z = math::normal_quantile(0.5 + level / 2.0);
  if (method == CiMethod::wilson) {
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    // rounding can push the bounds a hair past [0, share] / [share, 1]
    ci.lower = std::clamp(center - half, 0.0, p);
    ci.upper = std::clamp(center + half, p, 1.0);
  } else {
    const double half = z * std::sqrt(p * (1.0 - p) / nn);
    ci.lower = p - half;
    ci.upper = p + half;
    if (ci.lower < 0.0 || ci.upper > 1.0) ci.clipped = true;
    ci.lower = std::max(0.0, ci.lower);
    ci.upper = std::min(1.0, ci.upper);
  }
  return ci;
}

// Share of class "10%" publications under PR2, with confidence interval.
inline ProportionCi top10_share(const RankClassDistribution& dist, double ci_level = 0.95,
                                CiMethod method = CiMethod::wilson) {
  if (!dist.scheme || dist.scheme->name != "PR2")
    throw std::invalid_argument("indicators: top10_share requires a PR2 distribution");
  return proportion_ci(dist.counts[1], dist.total, ci_level, method);
}

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  // single observation; sd reported as 0
};

inline SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("indicators: empty group");
  SummaryStats s;
  s.n = values.size();
  s.mean = math::mean(values);
  s.sd = math::sample_sd(values);
  s.degenerate = values.size() == 1;
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  s.median = math::median({values.begin(), values.end()});
  return s;
}

// Largest h such that h publications have at least h citations.
inline std::int64_t h_index(std::span<const std::int64_t> citations) {
  std::vector<std::int64_t> sorted(citations.begin(), citations.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t h = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] >= static_cast<std::int64_t>(i + 1)) h = static_cast<std::int64_t>(i + 1);
  return h;
}

struct IndicatorReport {
  std::string group;
  std::size_t n = 0;
  double i3 = 0.0;
  double i3_max = 0.0;
  double i3_pct_of_max = 0.0;
  ProportionCi top10;
  SummaryStats percentile_stats;
  std::optional<std::int64_t> h_index;  // only when citations available
};

inline IndicatorReport indicator_report(const std::string& group,
                                        std::span<const double> percentiles,
                                        std::span<const std::int64_t> citations = {},
                                        double ci_level = 0.95,
                                        CiMethod ci_method = CiMethod::wilson) {
  IndicatorReport rep;
  rep.group = group;
  rep.n = percentiles.size();
  const auto d6 = distribution(percentiles, ClassScheme::pr6(), group);
  const auto d2 = distribution(percentiles, ClassScheme::pr2(), group);
  rep.i3 = i3(d6);
  rep.i3_max = i3_max(d6);
  rep.i3_pct_of_max = rep.i3 / rep.i3_max;
  rep.top10 = top10_share(d2, ci_level, ci_method);
  rep.percentile_stats = summary_stats(percentiles);
  if (!citations.empty()) rep.h_index = h_index(citations);
  return rep;
}

}  // namespace pctile
