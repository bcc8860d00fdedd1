#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pctile/charts.hpp"
#include "pctile/corpus.hpp"
#include "pctile/indicators.hpp"
#include "pctile/inference.hpp"
#include "pctile/percentile.hpp"
#include "pctile/rank_classes.hpp"
#include "pctile/regression.hpp"
#include "pctile/svg.hpp"

namespace pctile {

struct RunConfig {
  std::string input_path;
  std::string format = "csv";  // csv | json
  PercentileScheme scheme = PercentileScheme::incites_ge;
  CiMethod ci_method = CiMethod::wilson;
  double ci_level = 0.95;
  double alpha = kDefaultAlpha;
  std::string reference_group;  // empty = lexicographically first
  std::string out_dir = ".";
  bool fail_fast = false;
};

// Exit-code contract: 0 success, 1 validation failure, 2 statistical error.
enum class RunStatus { ok = 0, validation_error = 1, statistical_error = 2 };

struct RunResult {
  RunStatus status = RunStatus::ok;
  nlohmann::json report;
  std::vector<std::string> messages;
  std::vector<std::filesystem::path> artifacts;
};

// ---- JSON serialization ----------------------------------------------------

inline nlohmann::json to_json(const SummaryTable& t) {
  nlohmann::json j;
  j["groups"] = t.groups;
  j["years"] = t.years;
  j["counts"] = t.counts;
  j["group_totals"] = t.group_totals;
  j["year_totals"] = t.year_totals;
  j["grand_total"] = t.grand_total;
  return j;
}

inline nlohmann::json to_json(const RankClassDistribution& d) {
  nlohmann::json j;
  j["group"] = d.group;
  j["scheme"] = d.scheme->name;
  std::vector<std::string> labels;
  for (const auto& c : d.scheme->classes) labels.push_back(c.label);
  j["labels"] = labels;
  j["counts"] = d.counts;
  j["shares"] = d.shares;
  j["total"] = d.total;
  return j;
}

inline nlohmann::json to_json(const SummaryStats& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["min"] = s.min;
  j["max"] = s.max;
  j["median"] = s.median;
  if (s.degenerate) j["degenerate"] = true;
  return j;
}

inline nlohmann::json to_json(const ProportionCi& p) {
  nlohmann::json j;
  j["share"] = p.share;
  j["ci_lower"] = p.lower;
  j["ci_upper"] = p.upper;
  j["ci_level"] = p.level;
  j["ci_method"] = to_string(p.method);
  if (p.clipped) j["clipped"] = true;
  return j;
}

inline nlohmann::json to_json(const IndicatorReport& r) {
  nlohmann::json j;
  j["group"] = r.group;
  j["n"] = r.n;
  j["i3"] = r.i3;
  j["i3_max"] = r.i3_max;
  j["i3_pct_of_max"] = r.i3_pct_of_max;
  j["top10"] = to_json(r.top10);
  j["percentile_stats"] = to_json(r.percentile_stats);
  if (r.h_index) j["h_index"] = *r.h_index;
  return j;
}

inline nlohmann::json to_json(const TestResult& t) {
  nlohmann::json j;
  j["test"] = t.test_name;
  j["statistic"] = t.statistic;
  j["df"] = t.df;
  j["p_value"] = t.p_value;
  j["alpha"] = t.alpha;
  j["significant"] = t.significant;
  if (t.degenerate) j["degenerate"] = true;
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

inline nlohmann::json to_json(const PairwiseTable& t) {
  nlohmann::json j;
  j["adjustment"] = t.adjustment;
  j["m"] = t.m;
  j["alpha"] = t.alpha;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : t.comparisons) {
    nlohmann::json r;
    r["pair"] = c.group_a + " vs " + c.group_b;
    r["statistic"] = c.statistic;
    r["raw_p"] = c.raw_p;
    r["adjusted_p"] = c.adjusted_p;
    r["significant"] = c.significant;
    rows.push_back(r);
  }
  j["comparisons"] = rows;
  return j;
}

inline nlohmann::json to_json(const ChiSquareResult& r,
                              const std::vector<std::string>& groups,
                              const std::vector<std::string>& classes) {
  nlohmann::json j = to_json(r.test);
  j["groups"] = groups;
  j["classes"] = classes;
  j["observed"] = r.decomposition.observed;
  j["expected"] = r.decomposition.expected;
  j["contributions"] = r.decomposition.contributions;
  j["group_contribution_totals"] = r.decomposition.row_totals;
  j["class_contribution_totals"] = r.decomposition.column_totals;
  return j;
}

inline nlohmann::json to_json(const RegressionFit& fit, const Eigen::MatrixXd& vcov) {
  nlohmann::json j;
  nlohmann::json coefs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < fit.beta.size(); ++i) {
    nlohmann::json c;
    c["name"] = fit.column_names[static_cast<std::size_t>(i)];
    c["coefficient"] = fit.beta(i);
    const double se = std::sqrt(vcov(i, i));
    c["se"] = se;
    const double z = se > 0.0 ? fit.beta(i) / se : 0.0;
    c["statistic"] = z;
    c["p_value"] = math::two_sided_normal_p(z);
    coefs.push_back(c);
  }
  j["coefficients"] = coefs;
  j["reference_group"] = fit.reference_group;
  j["n_rows"] = fit.n_rows;
  j["n_unique_clusters"] = fit.n_unique_clusters;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["deviance"] = fit.deviance;
  std::vector<std::vector<double>> v(static_cast<std::size_t>(vcov.rows()));
  for (Eigen::Index r = 0; r < vcov.rows(); ++r)
    for (Eigen::Index c = 0; c < vcov.cols(); ++c)
      v[static_cast<std::size_t>(r)].push_back(vcov(r, c));
  j["robust_vcov"] = v;
  return j;
}

inline nlohmann::json to_json(const MarginsResult& m) {
  nlohmann::json j;
  j["ci_level"] = m.ci_level;
  nlohmann::json preds = nlohmann::json::array();
  for (const auto& p : m.predictions) {
    nlohmann::json e;
    e["group"] = p.group;
    e["probability"] = p.probability;
    e["se"] = p.se;
    e["ci_lower"] = p.ci_lower;
    e["ci_upper"] = p.ci_upper;
    preds.push_back(e);
  }
  j["adjusted_predictions"] = preds;
  nlohmann::json contrasts = nlohmann::json::array();
  for (const auto& c : m.contrasts) {
    nlohmann::json e;
    e["pair"] = c.group_a + " vs " + c.group_b;
    e["contrast"] = c.estimate;
    e["se"] = c.se;
    e["statistic"] = c.statistic;
    e["raw_p"] = c.raw_p;
    e["adjusted_p"] = c.adjusted_p;
    e["significant"] = c.significant;
    contrasts.push_back(e);
  }
  j["contrasts"] = contrasts;
  return j;
}

inline nlohmann::json to_json(const ViolinSpec& spec) {
  nlohmann::json j;
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : spec.groups) {
    nlohmann::json e;
    e["group"] = g.group;
    e["median"] = g.median;
    e["q1"] = g.q1;
    e["q3"] = g.q3;
    e["lower_adjacent"] = g.lower_adjacent;
    e["upper_adjacent"] = g.upper_adjacent;
    e["point_mass"] = g.point_mass;
    nlohmann::json dens = nlohmann::json::array();
    for (const auto& [x, d] : g.density) dens.push_back({x, d});
    e["density"] = dens;
    groups.push_back(e);
  }
  j["violin"] = groups;
  return j;
}

inline nlohmann::json to_json(const BoxPlotSpec& spec) {
  nlohmann::json j;
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : spec.boxes) {
    nlohmann::json e;
    e["group"] = b.group;
    e["year"] = b.year;
    e["median"] = b.median;
    e["q1"] = b.q1;
    e["q3"] = b.q3;
    e["whisker_lo"] = b.whisker_lo;
    e["whisker_hi"] = b.whisker_hi;
    boxes.push_back(e);
  }
  j["boxplot"] = boxes;
  j["reference_line"] = spec.reference_line;
  j["group_labels"] = spec.group_labels;
  if (!spec.notices.empty()) j["notices"] = spec.notices;
  return j;
}

inline nlohmann::json to_json(const BarChartSpec& spec) {
  nlohmann::json j;
  j["title"] = spec.title;
  j["y_axis"] = spec.y_axis;
  j["class_labels"] = spec.class_labels;
  nlohmann::json bars = nlohmann::json::array();
  nlohmann::json errs = nlohmann::json::array();
  nlohmann::json annos = nlohmann::json::array();
  for (const auto& b : spec.bars) {
    nlohmann::json e;
    e["group"] = b.group;
    if (!b.cls.empty()) e["class"] = b.cls;
    e["value"] = b.value;
    e["label"] = b.value_label;
    bars.push_back(e);
    if (b.err_lo && b.err_hi) errs.push_back({*b.err_lo, *b.err_hi});
    if (b.annotation) annos.push_back(*b.annotation);
  }
  j["bars"] = bars;
  j["error_bars"] = errs;
  j["annotations"] = annos;
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& r : spec.reference_lines) {
    nlohmann::json e;
    e["value"] = r.value;
    e["style"] = r.style;
    e["label"] = r.label;
    refs.push_back(e);
  }
  j["reference_lines"] = refs;
  return j;
}

// ---- Text tables -----------------------------------------------------------

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

inline std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

inline void pad(std::ostream& os, const std::string& s, std::size_t w) {
  os << s;
  for (std::size_t i = s.size(); i < w; ++i) os << ' ';
}

}  // namespace detail

inline std::string render_tables(const nlohmann::json& report, bool color = false) {
  std::ostringstream os;
  auto heading = [&](const std::string& s) {
    if (color) os << "\x1b[1m";
    os << s;
    if (color) os << "\x1b[0m";
    os << "\n";
  };

  heading("Publication counts per group and year");
  {
    const auto& t = report.at("summary_table");
    detail::pad(os, "Year", 8);
    for (const auto& g : t.at("groups")) detail::pad(os, g.get<std::string>(), 12);
    detail::pad(os, "Total", 12);
    os << "\n";
    const auto& years = t.at("years");
    const auto& counts = t.at("counts");
    for (std::size_t y = 0; y < years.size(); ++y) {
      detail::pad(os, std::to_string(years[y].get<int>()), 8);
      for (std::size_t g = 0; g < counts.size(); ++g)
        detail::pad(os, std::to_string(counts[g][y].get<std::size_t>()), 12);
      detail::pad(os, std::to_string(t.at("year_totals")[y].get<std::size_t>()), 12);
      os << "\n";
    }
    detail::pad(os, "Total", 8);
    for (const auto& gt : t.at("group_totals"))
      detail::pad(os, std::to_string(gt.get<std::size_t>()), 12);
    detail::pad(os, std::to_string(t.at("grand_total").get<std::size_t>()), 12);
    os << "\n\n";
  }

  heading("Summary percentile statistics");
  {
    detail::pad(os, "Group", 12);
    for (const char* h : {"N", "Min", "Max", "Mean", "SD", "Median"})
      detail::pad(os, h, 10);
    os << "\n";
    for (const auto& r : report.at("indicators")) {
      detail::pad(os, r.at("group").get<std::string>(), 12);
      const auto& s = r.at("percentile_stats");
      detail::pad(os, std::to_string(s.at("n").get<std::size_t>()), 10);
      for (const char* k : {"min", "max", "mean", "sd", "median"})
        detail::pad(os, detail::fixed2(s.at(k).get<double>()), 10);
      os << "\n";
    }
    if (report.contains("pooled_percentile_stats")) {
      const auto& s = report.at("pooled_percentile_stats");
      detail::pad(os, "Total", 12);
      detail::pad(os, std::to_string(s.at("n").get<std::size_t>()), 10);
      for (const char* k : {"min", "max", "mean", "sd", "median"})
        detail::pad(os, detail::fixed2(s.at(k).get<double>()), 10);
      os << "\n";
    }
    os << "\n";
  }

  heading("I3 and top-10% indicators");
  {
    detail::pad(os, "Group", 12);
    for (const char* h : {"N", "I3", "I3 % of max", "Top-10% share", "95% CI"})
      detail::pad(os, h, 16);
    os << "\n";
    for (const auto& r : report.at("indicators")) {
      detail::pad(os, r.at("group").get<std::string>(), 12);
      detail::pad(os, std::to_string(r.at("n").get<std::size_t>()), 16);
      detail::pad(os, detail::fixed2(r.at("i3").get<double>()), 16);
      detail::pad(os, detail::fixed2(100.0 * r.at("i3_pct_of_max").get<double>()) + "%",
                  16);
      const auto& t = r.at("top10");
      detail::pad(os, detail::fixed2(100.0 * t.at("share").get<double>()) + "%", 16);
      detail::pad(os,
                  "[" + detail::fixed2(100.0 * t.at("ci_lower").get<double>()) + ", " +
                      detail::fixed2(100.0 * t.at("ci_upper").get<double>()) + "]",
                  16);
      os << "\n";
    }
    os << "\n";
  }

  if (report.contains("regression") && report.at("regression").contains("fit")) {
    heading("Binary regression model (cluster-robust SEs)");
    const auto& fit = report.at("regression").at("fit");
    detail::pad(os, "Variable", 14);
    for (const char* h : {"Coefficient", "z", "p"}) detail::pad(os, h, 14);
    os << "\n";
    for (const auto& c : fit.at("coefficients")) {
      detail::pad(os, c.at("name").get<std::string>(), 14);
      detail::pad(os,
                  detail::fixed2(c.at("coefficient").get<double>()) +
                      detail::stars(c.at("p_value").get<double>()),
                  14);
      detail::pad(os, detail::fixed2(c.at("statistic").get<double>()), 14);
      detail::pad(os, detail::fixed2(c.at("p_value").get<double>()), 14);
      os << "\n";
    }
    os << "Number of publications   "
       << fit.at("n_rows").get<std::size_t>() << "\n";
    os << "Number of unique publications   "
       << fit.at("n_unique_clusters").get<std::size_t>() << "\n\n";

    heading("Pairwise comparisons of marginal linear predictions");
    const auto& margins = report.at("regression").at("margins");
    detail::pad(os, "Pair", 24);
    for (const char* h : {"Contrast", "z", "adj. p"}) detail::pad(os, h, 14);
    os << "\n";
    for (const auto& c : margins.at("contrasts")) {
      detail::pad(os, c.at("pair").get<std::string>(), 24);
      detail::pad(os,
                  detail::fixed2(c.at("contrast").get<double>()) +
                      detail::stars(c.at("adjusted_p").get<double>()),
                  14);
      detail::pad(os, detail::fixed2(c.at("statistic").get<double>()), 14);
      detail::pad(os, detail::fixed2(c.at("adjusted_p").get<double>()), 14);
      os << "\n";
    }
    os << "\nNotes: * p<0.05, ** p<0.01, *** p<0.001\n";
  }
  return os.str();
}

// ---- Pipeline --------------------------------------------------------------

struct StatisticalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Corpus load_input(const RunConfig& cfg, nlohmann::json* validation = nullptr) {
  LoadOptions opts;
  opts.fail_fast = cfg.fail_fast;
  LoadReport rep = cfg.format == "json" ? load_json(cfg.input_path, opts)
                                        : load_csv(cfg.input_path, opts);
  if (validation) {
    nlohmann::json v;
    v["rows_read"] = rep.rows_read;
    v["rows_rejected"] = rep.rows_rejected;
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& e : rep.errors)
      errs.push_back({{"row", e.row}, {"message", e.message}});
    v["errors"] = errs;
    nlohmann::json warns = nlohmann::json::array();
    for (const auto& w : rep.warnings)
      warns.push_back({{"row", w.row}, {"message", w.message}});
    v["warnings"] = warns;
    *validation = v;
  }
  if (rep.corpus.records.empty())
    throw std::runtime_error("report: no valid records in " + cfg.input_path);
  return rep.corpus;
}

// Fills percentiles from citations where missing, via the percentile engine.
inline Corpus ensure_percentiles(const Corpus& corpus, const RunConfig& cfg,
                                 std::vector<std::string>* warnings = nullptr) {
  bool missing = false;
  for (const auto& r : corpus.records)
    if (!r.percentile) missing = true;
  if (!missing) return corpus;
  auto run = assign_percentiles(corpus, cfg.scheme);
  if (warnings)
    warnings->insert(warnings->end(), run.warnings.begin(), run.warnings.end());
  return with_assigned_percentiles(corpus, run);
}

inline RunResult run_report(const RunConfig& cfg) {
  RunResult result;
  nlohmann::json& rep = result.report;

  nlohmann::json validation;
  Corpus raw;
  try {
    raw = load_input(cfg, &validation);
  } catch (const std::exception& e) {
    result.status = RunStatus::validation_error;
    result.messages.push_back(e.what());
    return result;
  }
  rep["validation"] = validation;

  std::vector<std::string> warnings;
  Corpus corpus = ensure_percentiles(raw, cfg, &warnings);

  nlohmann::json config;
  config["input"] = cfg.input_path;
  config["format"] = cfg.format;
  config["scheme"] = to_string(cfg.scheme);
  config["ci_method"] = to_string(cfg.ci_method);
  config["ci_level"] = cfg.ci_level;
  config["alpha"] = cfg.alpha;
  config["reference_group"] = cfg.reference_group;
  rep["config"] = config;

  const auto table = summary_table(corpus);
  rep["summary_table"] = to_json(table);

  const auto groups = corpus.group_labels();
  std::vector<std::vector<double>> group_pcts;
  std::vector<double> pooled;
  for (const auto& g : groups) {
    group_pcts.push_back(group_percentiles(corpus, g));
    pooled.insert(pooled.end(), group_pcts.back().begin(), group_pcts.back().end());
  }

  // per-group distributions and indicators
  std::vector<RankClassDistribution> pr6_dists;
  std::vector<IndicatorReport> indicators;
  nlohmann::json dist_json;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (group_pcts[i].empty()) {
      warnings.push_back("group " + groups[i] + " has no percentile data; skipped");
      continue;
    }
    pr6_dists.push_back(distribution(group_pcts[i], ClassScheme::pr6(), groups[i]));
    dist_json["PR6"].push_back(to_json(pr6_dists.back()));
    dist_json["PR2"].push_back(
        to_json(distribution(group_pcts[i], ClassScheme::pr2(), groups[i])));
    std::vector<std::int64_t> cits;
    for (auto idx : corpus.group_index.at(groups[i]))
      if (corpus.records[idx].citations) cits.push_back(*corpus.records[idx].citations);
    if (cits.size() != group_pcts[i].size()) cits.clear();  // partial: omit h-index
    indicators.push_back(
        indicator_report(groups[i], group_pcts[i], cits, cfg.ci_level, cfg.ci_method));
  }
  rep["distributions"] = dist_json;
  nlohmann::json ind_json = nlohmann::json::array();
  for (const auto& r : indicators) ind_json.push_back(to_json(r));
  rep["indicators"] = ind_json;
  if (!pooled.empty()) rep["pooled_percentile_stats"] = to_json(summary_stats(pooled));

  // significance battery
  nlohmann::json tests;
  try {
    if (pooled.size() >= 8)
      tests["normality"] = to_json(normality_test(pooled, cfg.alpha));
    std::vector<std::vector<double>> nonempty;
    std::vector<std::string> nonempty_labels;
    for (std::size_t i = 0; i < groups.size(); ++i)
      if (!group_pcts[i].empty()) {
        nonempty.push_back(group_pcts[i]);
        nonempty_labels.push_back(groups[i]);
      }
    PairwiseTable pairwise;
    bool have_pairwise = false;
    if (nonempty.size() >= 2) {
      tests["kruskal_wallis"] = to_json(kruskal_wallis(nonempty, cfg.alpha));
      pairwise = pairwise_rank_tests(nonempty_labels, nonempty, cfg.alpha);
      have_pairwise = true;
      tests["pairwise"] = to_json(pairwise);
    } else {
      tests["kruskal_wallis"] = "not applicable: fewer than 2 groups";
      tests["pairwise"] = "not applicable: fewer than 2 groups";
    }
    std::vector<std::string> class_labels;
    for (const auto& c : ClassScheme::pr6().classes) class_labels.push_back(c.label);
    std::optional<ChiSquareResult> chi2;
    if (pr6_dists.size() >= 2) {
      std::vector<std::vector<double>> observed;
      for (const auto& d : pr6_dists) {
        std::vector<double> row;
        for (auto c : d.counts) row.push_back(static_cast<double>(c));
        observed.push_back(row);
      }
      try {
        chi2 = chi_square_independence(observed, cfg.alpha);
        tests["chi_square"] = to_json(*chi2, nonempty_labels, class_labels);
      } catch (const std::exception& e) {
        tests["chi_square"] = std::string("not applicable: ") + e.what();
      }
    } else {
      tests["chi_square"] = "not applicable: fewer than 2 groups";
    }
    rep["tests"] = tests;

    // regression
    nlohmann::json regr;
    const auto subset = regression_subset(corpus);
    regr["subset"] = {{"total_pairs", subset.total_pairs},
                      {"retained_pairs", subset.retained_pairs},
                      {"unique_publications", subset.unique_pubs}};
    bool have_margins = false;
    MarginsResult margins_result;
    if (subset.empty()) {
      regr["skipped"] = "no rows with complete model variables";
      warnings.push_back("regression skipped: zero usable rows");
    } else if (subset.corpus.group_index.size() < 2) {
      regr["skipped"] = "fewer than 2 groups in the complete-case subset";
    } else {
      auto design = build_design(subset.corpus, cfg.reference_group);
      auto fit = fit_logit(design);
      auto vcov = cluster_robust_vcov(fit, design);
      regr["fit"] = to_json(fit, vcov);
      margins_result = margins(fit, design, vcov, cfg.ci_level, cfg.alpha);
      regr["margins"] = to_json(margins_result);
      have_margins = true;
    }
    rep["regression"] = regr;

    // figures
    std::map<std::string, std::vector<double>> per_group;
    for (std::size_t i = 0; i < groups.size(); ++i)
      if (!group_pcts[i].empty()) per_group[groups[i]] = group_pcts[i];
    nlohmann::json figures;
    std::map<std::string, std::string> svgs;
    if (!per_group.empty()) {
      const auto fig1 = violin(per_group);
      figures["fig1"] = to_json(fig1);
      svgs["fig1.svg"] = svg::render_svg(fig1);
      const auto fig2 = boxplots_by_year(corpus, have_pairwise ? &pairwise : nullptr);
      figures["fig2"] = to_json(fig2);
      svgs["fig2.svg"] = svg::render_svg(fig2);
    }
    if (chi2) {
      const auto fig3 = pr6_bar_chart(pr6_dists, chi2->decomposition);
      figures["fig3"] = to_json(fig3);
      svgs["fig3.svg"] = svg::render_svg(fig3);
    }
    if (!indicators.empty()) {
      const auto fig4 = top10_bar_chart(indicators);
      figures["fig4"] = to_json(fig4);
      svgs["fig4.svg"] = svg::render_svg(fig4);
    }
    if (have_margins) {
      const auto fig5 = margins_chart(margins_result);
      figures["fig5"] = to_json(fig5);
      svgs["fig5.svg"] = svg::render_svg(fig5);
    }
    rep["figures"] = figures;
    rep["warnings"] = warnings;

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    auto write_file = [&](const std::string& name, const std::string& content) {
      const fs::path p = fs::path(cfg.out_dir) / name;
      std::ofstream f(p, std::ios::binary);
      f << content;
      result.artifacts.push_back(p);
    };
    write_file("report.json", rep.dump(2) + "\n");
    write_file("tables.txt", render_tables(rep, false));
    for (const auto& [name, content] : svgs) write_file(name, content);
  } catch (const std::exception& e) {
    result.status = RunStatus::statistical_error;
    result.messages.push_back(e.what());
    return result;
  }
  return result;
}

}  // namespace pctile
