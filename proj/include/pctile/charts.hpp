#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pctile/corpus.hpp"
#include "pctile/indicators.hpp"
#include "pctile/inference.hpp"
#include "pctile/math.hpp"
#include "pctile/rank_classes.hpp"
#include "pctile/regression.hpp"

namespace pctile {

// ---- Kernel density on the bounded percentile domain ----------------------

struct BandwidthRule {
  bool silverman = true;
  double fixed_h = 0.0;
  static BandwidthRule fixed(double h) { return {false, h}; }
};

// Silverman: h = 0.9 * min(sd, IQR/1.34) * n^(-1/5).
inline double silverman_bandwidth(std::span<const double> values) {
  const double sd = math::sample_sd(values);
  const double iqr = math::quantile({values.begin(), values.end()}, 0.75) -
                     math::quantile({values.begin(), values.end()}, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

// Gaussian KDE on [lo, hi] with boundary reflection at both ends, evaluated
// on a uniform grid.
inline std::vector<std::pair<double, double>> kde_reflected(
    std::span<const double> values, double h, double lo, double hi,
    std::size_t grid_points) {
  if (values.empty()) throw std::invalid_argument("charts: KDE of empty sample");
  if (h <= 0.0) throw std::invalid_argument("charts: non-positive bandwidth");
  if (grid_points < 2) throw std::invalid_argument("charts: grid too small");
  const auto n = static_cast<double>(values.size());
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * M_PI));
  std::vector<std::pair<double, double>> out(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    double dens = 0.0;
    for (double v : values) {
      auto kern = [&](double center) {
        const double u = (x - center) / h;
        return std::exp(-0.5 * u * u);
      };
      dens += kern(v) + kern(2.0 * lo - v) + kern(2.0 * hi - v);
    }
    out[i] = {x, norm * dens};
  }
  return out;
}

// ---- Chart specs -----------------------------------------------------------

struct ViolinGroup {
  std::string group;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double lower_adjacent = 0.0;  // Tukey 1.5*IQR rule
  double upper_adjacent = 0.0;
  bool point_mass = false;  // degenerate group, no density curve
  std::vector<std::pair<double, double>> density;  // (grid, density)
};

struct ViolinSpec {
  std::vector<ViolinGroup> groups;
  double bandwidth = 0.0;  // 0 when per-group Silverman
};

struct Box {
  std::string group;
  int year = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
};

struct BoxPlotSpec {
  std::vector<Box> boxes;
  double reference_line = 50.0;
  // per-group label: all-years median and significantly different groups
  std::vector<std::string> group_labels;
  std::vector<std::string> notices;  // e.g. omitted empty years
};

struct Bar {
  std::string group;
  std::string cls;           // class label ("" for single-series charts)
  double value = 0.0;        // bar height
  std::string value_label;   // printed below/inside the bar
  std::optional<double> annotation;  // e.g. chi-square contribution above the bar
  std::optional<double> err_lo;
  std::optional<double> err_hi;
};

struct ReferenceLine {
  double value = 0.0;
  std::string style;  // "solid" | "dashed"
  std::string label;
};

struct BarChartSpec {
  std::string title;
  std::string y_axis;
  std::vector<std::string> class_labels;  // x-axis categories (may be empty)
  std::vector<Bar> bars;
  std::vector<ReferenceLine> reference_lines;
};

// ---- Builders --------------------------------------------------------------

namespace detail {

struct FiveNum {
  double median, q1, q3, lo_adj, hi_adj;
};

inline FiveNum five_numbers(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  FiveNum f{};
  f.median = math::quantile(s, 0.5);
  f.q1 = math::quantile(s, 0.25);
  f.q3 = math::quantile(s, 0.75);
  const double iqr = f.q3 - f.q1;
  const double lo_fence = f.q1 - 1.5 * iqr;
  const double hi_fence = f.q3 + 1.5 * iqr;
  std::sort(s.begin(), s.end());
  f.lo_adj = s.back();
  f.hi_adj = s.front();
  for (double x : s) {
    if (x >= lo_fence) {
      f.lo_adj = x;
      break;
    }
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (*it <= hi_fence) {
      f.hi_adj = *it;
      break;
    }
  }
  return f;
}

}  // namespace detail

inline ViolinSpec violin(const std::map<std::string, std::vector<double>>& per_group,
                         BandwidthRule bandwidth_rule = {},
                         std::size_t grid_points = 101) {
  ViolinSpec spec;
  spec.bandwidth = bandwidth_rule.silverman ? 0.0 : bandwidth_rule.fixed_h;
  for (const auto& [name, values] : per_group) {
    if (values.empty()) throw std::invalid_argument("charts: empty violin group " + name);
    ViolinGroup g;
    g.group = name;
    const auto f = detail::five_numbers(values);
    g.median = f.median;
    g.q1 = f.q1;
    g.q3 = f.q3;
    g.lower_adjacent = f.lo_adj;
    g.upper_adjacent = f.hi_adj;
    const bool degenerate =
        std::all_of(values.begin(), values.end(),
                    [&](double x) { return x == values.front(); });
    if (degenerate) {
      g.point_mass = true;
    } else {
      const double h =
          bandwidth_rule.silverman ? silverman_bandwidth(values) : bandwidth_rule.fixed_h;
      g.density = kde_reflected(values, h, 0.0, 100.0, grid_points);
    }
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

inline BoxPlotSpec boxplots_by_year(const Corpus& corpus,
                                    const PairwiseTable* pairwise = nullptr) {
  BoxPlotSpec spec;
  const auto table = summary_table(corpus);
  for (const auto& g : table.groups) {
    std::map<int, std::vector<double>> by_year;
    for (auto idx : corpus.group_index.at(g)) {
      const auto& r = corpus.records[idx];
      if (r.percentile) by_year[r.year].push_back(*r.percentile);
    }
    std::vector<double> all;
    for (const int y : table.years) {
      auto it = by_year.find(y);
      if (it == by_year.end() || it->second.empty()) {
        spec.notices.push_back(g + "/" + std::to_string(y) + ": no records, omitted");
        continue;
      }
      const auto f = detail::five_numbers(it->second);
      spec.boxes.push_back({g, y, f.median, f.q1, f.q3, f.lo_adj, f.hi_adj});
      all.insert(all.end(), it->second.begin(), it->second.end());
    }
    if (all.empty()) continue;
    std::string label = g + " (med=" + [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", math::median(all));
      return std::string(buf);
    }() + ")";
    if (pairwise) {
      std::string diff;
      for (const auto& c : pairwise->comparisons) {
        if (!c.significant) continue;
        if (c.group_a == g) diff += (diff.empty() ? "" : ", ") + c.group_b;
        if (c.group_b == g) diff += (diff.empty() ? "" : ", ") + c.group_a;
      }
      if (!diff.empty()) label += " differs from: " + diff;
    }
    spec.group_labels.push_back(label);
  }
  return spec;
}

namespace detail {

inline std::string pct_label(double share) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * share);
  return std::string(buf);
}

}  // namespace detail

// Figure-3 style: PR6 shares per group with chi-square cell contributions.
inline BarChartSpec pr6_bar_chart(const std::vector<RankClassDistribution>& dists,
                                  const ChiSquareDecomposition& decomposition) {
  if (dists.empty()) throw std::invalid_argument("charts: no distributions");
  const auto& scheme = *dists.front().scheme;
  if (decomposition.observed.size() != dists.size() ||
      decomposition.observed.front().size() != scheme.classes.size())
    throw std::invalid_argument("charts: decomposition grid does not match distributions");
  BarChartSpec spec;
  spec.title = "Share of publications per percentile rank class";
  spec.y_axis = "% of publications";
  for (const auto& c : scheme.classes) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s (exp %g)", c.label.c_str(),
                  100.0 * c.expected_share);
    spec.class_labels.emplace_back(buf);
  }
  for (std::size_t ci = 0; ci < scheme.classes.size(); ++ci)
    for (std::size_t gi = 0; gi < dists.size(); ++gi) {
      Bar b;
      b.group = dists[gi].group;
      b.cls = scheme.classes[ci].label;
      b.value = 100.0 * dists[gi].shares[ci];
      b.value_label = detail::pct_label(dists[gi].shares[ci]);
      b.annotation = decomposition.contributions[gi][ci];
      spec.bars.push_back(std::move(b));
    }
  return spec;
}

// Figure-4 style: top-10% shares with CI error bars and reference lines at
// the expected 10% and the pooled share. The underlying count goes into the
// bar label so both readings of the axis are available.
inline BarChartSpec top10_bar_chart(const std::vector<IndicatorReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("charts: no indicator reports");
  BarChartSpec spec;
  spec.title = "Publications in the top-10% class";
  spec.y_axis = "share of publications";
  double pooled_num = 0.0, pooled_den = 0.0;
  for (const auto& r : reports) {
    Bar b;
    b.group = r.group;
    const double count = std::round(r.top10.share * static_cast<double>(r.n));
    b.value = r.top10.share;
    b.value_label = detail::pct_label(r.top10.share) + " (n=" + [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.0f", count);
      return std::string(buf);
    }() + ")";
    b.err_lo = r.top10.lower;
    b.err_hi = r.top10.upper;
    spec.bars.push_back(std::move(b));
    pooled_num += r.top10.share * static_cast<double>(r.n);
    pooled_den += static_cast<double>(r.n);
  }
  spec.reference_lines.push_back({0.10, "solid", "expected 10%"});
  spec.reference_lines.push_back({pooled_num / pooled_den, "dashed", "all groups"});
  return spec;
}

// Figure-5 style: adjusted predictions with CI error bars, sorted group order.
inline BarChartSpec margins_chart(const MarginsResult& margins) {
  BarChartSpec spec;
  spec.title = "Adjusted predictions of top-10% membership";
  spec.y_axis = "Pr(class 10%)";
  auto preds = margins.predictions;
  std::sort(preds.begin(), preds.end(),
            [](const auto& a, const auto& b) { return a.group < b.group; });
  for (const auto& p : preds) {
    Bar b;
    b.group = p.group;
    b.value = p.probability;
    b.value_label = detail::pct_label(p.probability);
    b.err_lo = p.ci_lower;
    b.err_hi = p.ci_upper;
    spec.bars.push_back(std::move(b));
  }
  return spec;
}

}  // namespace pctile
