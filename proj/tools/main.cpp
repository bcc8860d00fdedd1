// Command-line front end: ingest -> percentiles -> classes -> indicators ->
// tests -> regression -> report.

#include <cstdlib>
#include <iostream>
#include <unistd.h>

#include <CLI11.hpp>

#include "pctile/report.hpp"

namespace {

bool use_color() {
  if (std::getenv("PERCENTILE_IMPACT_NO_COLOR")) return false;
  return isatty(fileno(stdout));
}

struct CommonOpts {
  pctile::RunConfig cfg;
  void attach(CLI::App* app) {
    app->add_option("--input", cfg.input_path, "Input data file")->required();
    app->add_option("--format", cfg.format, "Input format")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option_function<std::string>(
           "--scheme",
           [this](const std::string& s) {
             cfg.scheme = s == "complement_exclusive"
                              ? pctile::PercentileScheme::complement_exclusive
                              : pctile::PercentileScheme::incites_ge;
           },
           "Percentile scheme")
        ->check(CLI::IsMember({"incites_ge", "complement_exclusive"}));
    app->add_option_function<std::string>(
           "--ci",
           [this](const std::string& s) {
             cfg.ci_method =
                 s == "wald" ? pctile::CiMethod::wald : pctile::CiMethod::wilson;
           },
           "Confidence interval method")
        ->check(CLI::IsMember({"wilson", "wald"}));
    app->add_option("--ci-level", cfg.ci_level, "Confidence level")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--alpha", cfg.alpha, "Significance level")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--ref-group", cfg.reference_group,
                    "Reference group for the regression model");
    app->add_option("--out-dir", cfg.out_dir, "Output directory");
    app->add_flag("--fail-fast", cfg.fail_fast, "Abort on the first invalid row");
  }
};

int finish(const pctile::RunResult& result) {
  for (const auto& m : result.messages) std::cerr << "error: " << m << "\n";
  return static_cast<int>(result.status);
}

// Runs the full pipeline but prints only the requested report section.
int run_section(const pctile::RunConfig& cfg, const std::string& key) {
  auto result = pctile::run_report(cfg);
  if (result.status != pctile::RunStatus::ok) return finish(result);
  if (result.report.contains(key))
    std::cout << result.report.at(key).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percentile-based citation impact analysis"};
  app.require_subcommand(1);

  CommonOpts report_opts, validate_opts, pct_opts, classify_opts, ind_opts, test_opts,
      regress_opts, plot_opts;

  auto* cmd_report = app.add_subcommand("report", "Full analysis with all artifacts");
  report_opts.attach(cmd_report);
  auto* cmd_validate = app.add_subcommand("validate", "Check the input file");
  validate_opts.attach(cmd_validate);
  auto* cmd_pct =
      app.add_subcommand("percentiles", "Assign percentiles from citation counts");
  pct_opts.attach(cmd_pct);
  auto* cmd_classify = app.add_subcommand("classify", "PR(6)/PR(2) distributions");
  classify_opts.attach(cmd_classify);
  auto* cmd_ind = app.add_subcommand("indicators", "I3, top-10% shares, h-index");
  ind_opts.attach(cmd_ind);
  auto* cmd_test = app.add_subcommand("test", "Significance test battery");
  test_opts.attach(cmd_test);
  auto* cmd_regress = app.add_subcommand("regress", "Cluster-robust logistic model");
  regress_opts.attach(cmd_regress);
  auto* cmd_plot = app.add_subcommand("plot", "Figure generation only");
  plot_opts.attach(cmd_plot);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_report->parsed()) {
      auto result = pctile::run_report(report_opts.cfg);
      if (result.status != pctile::RunStatus::ok) return finish(result);
      std::cout << pctile::render_tables(result.report, use_color());
      for (const auto& p : result.artifacts) std::cout << "wrote " << p.string() << "\n";
      return 0;
    }
    if (cmd_validate->parsed()) {
      nlohmann::json validation;
      try {
        pctile::load_input(validate_opts.cfg, &validation);
      } catch (const std::exception& e) {
        if (!validation.is_null()) std::cout << validation.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      std::cout << validation.dump(2) << "\n";
      return validation.at("rows_rejected").get<std::size_t>() == 0 ? 0 : 1;
    }
    if (cmd_pct->parsed()) {
      auto corpus = pctile::load_input(pct_opts.cfg);
      auto run = pctile::assign_percentiles(corpus, pct_opts.cfg.scheme);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& a : run.assignments) {
        nlohmann::json e;
        e["pub_id"] = a.pub_id;
        e["percentile"] = a.percentile;
        e["refset"] = {{"subject", a.refset_key.subject},
                       {"year", a.refset_key.year},
                       {"doc_type", pctile::to_string(a.refset_key.doc_type)},
                       {"size", a.refset_size}};
        e["scheme"] = pctile::to_string(a.scheme);
        out.push_back(e);
      }
      std::cout << out.dump(2) << "\n";
      for (const auto& w : run.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
    if (cmd_classify->parsed()) return run_section(classify_opts.cfg, "distributions");
    if (cmd_ind->parsed()) return run_section(ind_opts.cfg, "indicators");
    if (cmd_test->parsed()) return run_section(test_opts.cfg, "tests");
    if (cmd_regress->parsed()) return run_section(regress_opts.cfg, "regression");
    if (cmd_plot->parsed()) return run_section(plot_opts.cfg, "figures");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
