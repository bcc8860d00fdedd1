#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pctile {

// One percentile rank class: lower-exclusive, upper-inclusive interval.
struct RankClass {
  std::string label;
  double lower = 0.0;   // exclusive
  double upper = 0.0;   // inclusive
  double expected_share = 0.0;  // share under random selection
};

// Classes are listed worst-first (<50% first), matching the reporting order.
struct ClassScheme {
  std::string name;
  std::vector<RankClass> classes;

  static const ClassScheme& pr6() {
    static const ClassScheme s{
        "PR6",
        {{"<50%", 50.0, 100.0, 0.50},
         {"50%", 25.0, 50.0, 0.25},
         {"25%", 10.0, 25.0, 0.15},
         {"10%", 5.0, 10.0, 0.05},
         {"5%", 1.0, 5.0, 0.04},
         {"1%", 0.0, 1.0, 0.01}}};
    return s;
  }

  static const ClassScheme& pr2() {
    static const ClassScheme s{
        "PR2", {{"<90%", 10.0, 100.0, 0.90}, {"10%", 0.0, 10.0, 0.10}}};
    return s;
  }
};

// Index of the class containing the percentile. Boundaries are
// upper-inclusive: 50 -> class "50%", 1 -> class "1%".
inline std::size_t classify_index(double percentile, const ClassScheme& scheme) {
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw std::invalid_argument("rank_classes: percentile outside (0, 100]: " +
                                std::to_string(percentile));
  for (std::size_t i = 0; i < scheme.classes.size(); ++i) {
    const auto& c = scheme.classes[i];
    if (percentile > c.lower && percentile <= c.upper) return i;
  }
  throw std::logic_error("rank_classes: scheme intervals do not cover percentile");
}

inline const std::string& classify(double percentile, const ClassScheme& scheme) {
  return scheme.classes[classify_index(percentile, scheme)].label;
}

struct RankClassDistribution {
  std::string group;
  const ClassScheme* scheme = nullptr;
  std::vector<std::size_t> counts;  // per class, scheme order
  std::vector<double> shares;       // counts / total
  std::size_t total = 0;
};

inline RankClassDistribution distribution(std::span<const double> percentiles,
                                          const ClassScheme& scheme,
                                          const std::string& group = "") {
  if (percentiles.empty())
    throw std::invalid_argument("rank_classes: group '" + group + "' has no records");
  RankClassDistribution d;
  d.group = group;
  d.scheme = &scheme;
  d.counts.assign(scheme.classes.size(), 0);
  for (double p : percentiles) ++d.counts[classify_index(p, scheme)];
  d.total = percentiles.size();
  d.shares.resize(d.counts.size());
  for (std::size_t i = 0; i < d.counts.size(); ++i)
    d.shares[i] = static_cast<double>(d.counts[i]) / static_cast<double>(d.total);
  return d;
}

}  // namespace pctile
