#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pctile/report.hpp"

using namespace pctile;
namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader =
    "pub_id,group,year,doc_type,subject,citations,percentile,pages,n_authors";

fs::path temp_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("pctile_report_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_csv(const std::string& tag, const std::vector<std::string>& rows) {
  auto p = temp_dir(tag) / "input.csv";
  std::ofstream f(p);
  f << kHeader << "\n";
  for (const auto& r : rows) f << r << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Minimal walker for the subset of JSON Schema used by the bundled report
// schema: type, required, properties, items, $ref into #/definitions.
struct SchemaChecker {
  const nlohmann::json& root;
  std::vector<std::string> failures;

  void check(const nlohmann::json& schema, const nlohmann::json& value,
             const std::string& path) {
    const nlohmann::json* s = &schema;
    if (s->contains("$ref")) {
      std::string ref = s->at("$ref").get<std::string>();
      REQUIRE(ref.rfind("#/definitions/", 0) == 0);
      s = &root.at("definitions").at(ref.substr(14));
    }
    if (s->contains("type")) {
      const std::string t = s->at("type").get<std::string>();
      const bool ok = (t == "object" && value.is_object()) ||
                      (t == "array" && value.is_array()) ||
                      (t == "string" && value.is_string()) ||
                      (t == "integer" && value.is_number_integer()) ||
                      (t == "number" && value.is_number()) ||
                      (t == "boolean" && value.is_boolean());
      if (!ok) failures.push_back(path + ": expected type " + t);
    }
    if (s->contains("required") && value.is_object())
      for (const auto& key : s->at("required"))
        if (!value.contains(key.get<std::string>()))
          failures.push_back(path + ": missing required key " +
                             key.get<std::string>());
    if (s->contains("properties") && value.is_object())
      for (const auto& [key, sub] : s->at("properties").items())
        if (value.contains(key)) check(sub, value.at(key), path + "/" + key);
    if (s->contains("items") && value.is_array())
      for (std::size_t i = 0; i < value.size(); ++i)
        check(s->at("items"), value[i], path + "[" + std::to_string(i) + "]");
  }
};

}  // namespace

TEST_CASE("full pipeline on the bundled dataset") {
  RunConfig cfg;
  cfg.input_path = std::string(PCTILE_DATA_DIR) + "/synthetic.csv";
  cfg.out_dir = temp_dir("full").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);

  for (const char* name : {"report.json", "tables.txt", "fig1.svg", "fig2.svg",
                           "fig3.svg", "fig4.svg", "fig5.svg"})
    CHECK_MESSAGE(fs::exists(fs::path(cfg.out_dir) / name), name);

  const auto& rep = result.report;
  // summary table is internally consistent
  const auto& table = rep.at("summary_table");
  std::size_t grand = 0;
  for (const auto& gt : table.at("group_totals")) grand += gt.get<std::size_t>();
  CHECK(grand == table.at("grand_total").get<std::size_t>());
  std::size_t grand2 = 0;
  for (const auto& yt : table.at("year_totals")) grand2 += yt.get<std::size_t>();
  CHECK(grand2 == grand);
  CHECK(table.at("groups").size() == 4);

  // distributions: shares sum to 1 per group
  for (const auto& scheme : {"PR6", "PR2"})
    for (const auto& d : rep.at("distributions").at(scheme)) {
      double total = 0.0;
      for (const auto& s : d.at("shares")) total += s.get<double>();
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

  // four groups worth of indicators, each with a CI around the share
  REQUIRE(rep.at("indicators").size() == 4);
  for (const auto& r : rep.at("indicators")) {
    const auto& t = r.at("top10");
    CHECK(t.at("ci_lower").get<double>() <= t.at("share").get<double>());
    CHECK(t.at("share").get<double>() <= t.at("ci_upper").get<double>());
  }

  // significance battery ran
  CHECK(rep.at("tests").at("kruskal_wallis").is_object());
  CHECK(rep.at("tests").at("pairwise").at("m").get<int>() == 6);
  CHECK(rep.at("tests").at("chi_square").at("df").get<double>() == 15.0);

  // regression fit with cluster-robust vcov present
  const auto& fit = rep.at("regression").at("fit");
  CHECK(fit.at("converged").get<bool>());
  CHECK(fit.at("coefficients").size() == 6);  // intercept + 3 dummies + 2 covars
  CHECK(fit.at("n_unique_clusters").get<std::size_t>() <
        fit.at("n_rows").get<std::size_t>() + 1);
  CHECK(rep.at("regression").at("margins").at("adjusted_predictions").size() == 4);

  // report.json on disk parses back to the in-memory report
  auto on_disk = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "report.json"));
  CHECK(on_disk == rep);

  // tables render with the significance legend
  const auto tables = slurp(fs::path(cfg.out_dir) / "tables.txt");
  CHECK(tables.find("Publication counts per group and year") != std::string::npos);
  CHECK(tables.find("I3 and top-10% indicators") != std::string::npos);
  CHECK(tables.find("* p<0.05, ** p<0.01, *** p<0.001") != std::string::npos);
}

TEST_CASE("report validates against the bundled schema") {
  RunConfig cfg;
  cfg.input_path = std::string(PCTILE_DATA_DIR) + "/synthetic.csv";
  cfg.out_dir = temp_dir("schema").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);

  const auto schema = nlohmann::json::parse(
      slurp(fs::path(PCTILE_SOURCE_DIR) / "schemas" / "report.schema.json"));
  SchemaChecker checker{schema, {}};
  checker.check(schema, result.report, "");
  for (const auto& f : checker.failures) MESSAGE(f);
  CHECK(checker.failures.empty());
}

TEST_CASE("two runs produce byte-identical artifacts") {
  RunConfig a;
  a.input_path = std::string(PCTILE_DATA_DIR) + "/synthetic.csv";
  a.out_dir = temp_dir("det_a").string();
  RunConfig b = a;
  b.out_dir = temp_dir("det_b").string();
  auto ra = run_report(a);
  auto rb = run_report(b);
  REQUIRE(ra.status == RunStatus::ok);
  REQUIRE(rb.status == RunStatus::ok);
  REQUIRE(ra.artifacts.size() == rb.artifacts.size());
  for (std::size_t i = 0; i < ra.artifacts.size(); ++i)
    CHECK(slurp(ra.artifacts[i]) == slurp(rb.artifacts[i]));
}

TEST_CASE("single group: omnibus tests marked not applicable") {
  std::vector<std::string> rows;
  for (int i = 1; i <= 30; ++i)
    rows.push_back("p" + std::to_string(i) + ",Solo,2008,article,CHEM,," +
                   std::to_string(i * 3) + ".0,10,2");
  auto input = write_csv("single", rows);
  RunConfig cfg;
  cfg.input_path = input.string();
  cfg.out_dir = (input.parent_path() / "out").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);
  const auto& tests = result.report.at("tests");
  CHECK(tests.at("kruskal_wallis").is_string());
  CHECK(tests.at("kruskal_wallis").get<std::string>().find("not applicable") !=
        std::string::npos);
  CHECK(tests.at("pairwise").is_string());
  CHECK(tests.at("chi_square").is_string());
  // regression subset has one group -> skipped, never errors
  CHECK(result.report.at("regression").contains("skipped"));
  CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "fig3.svg"));
  CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "fig5.svg"));
}

TEST_CASE("missing covariates: regression skipped with a warning") {
  std::vector<std::string> rows;
  for (int i = 1; i <= 20; ++i) {
    const std::string g = i % 2 ? "A" : "B";
    rows.push_back("p" + std::to_string(i) + "," + g + ",2008,article,CHEM,," +
                   std::to_string(i * 4) + ".5,,");
  }
  auto input = write_csv("nocov", rows);
  RunConfig cfg;
  cfg.input_path = input.string();
  cfg.out_dir = (input.parent_path() / "out").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);
  CHECK(result.report.at("regression").at("skipped").is_string());
  bool warned = false;
  for (const auto& w : result.report.at("warnings"))
    if (w.get<std::string>().find("regression skipped") != std::string::npos)
      warned = true;
  CHECK(warned);
}

TEST_CASE("exit-code contract") {
  RunConfig missing;
  missing.input_path = "/nonexistent/input.csv";
  auto r1 = run_report(missing);
  CHECK(r1.status == RunStatus::validation_error);
  CHECK(static_cast<int>(r1.status) == 1);
  CHECK_FALSE(r1.messages.empty());

  // all rows invalid -> empty corpus -> validation failure
  auto bad = write_csv("allbad", {"p1,A,2008,article,CHEM,,,10,2",
                                  "p2,A,2008,article,CHEM,,150.0,10,2"});
  RunConfig cfg_bad;
  cfg_bad.input_path = bad.string();
  auto r2 = run_report(cfg_bad);
  CHECK(r2.status == RunStatus::validation_error);

  // group membership perfectly separates the top-10% outcome -> the model
  // cannot be estimated -> statistical error
  std::vector<std::string> rows;
  for (int i = 1; i <= 24; ++i) {
    const bool first = i <= 12;
    const std::string g = first ? "A" : "B";
    const double pct = first ? 2.0 + 0.5 * i : 40.0 + i;
    std::ostringstream row;
    row << "p" << i << "," << g << ",2008,article,CHEM,," << pct << ","
        << (8 + i % 5) << "," << (1 + i % 4);
    rows.push_back(row.str());
  }
  auto sep = write_csv("separated", rows);
  RunConfig cfg_sep;
  cfg_sep.input_path = sep.string();
  cfg_sep.out_dir = (sep.parent_path() / "out").string();
  auto r3 = run_report(cfg_sep);
  CHECK(r3.status == RunStatus::statistical_error);
  CHECK(static_cast<int>(r3.status) == 2);
  CHECK_FALSE(r3.messages.empty());
}

TEST_CASE("percentile engine fills missing percentiles before analysis") {
  std::vector<std::string> rows;
  for (int i = 1; i <= 40; ++i) {
    const std::string g = i % 2 ? "A" : "B";
    rows.push_back("p" + std::to_string(i) + "," + g + ",2008,article,CHEM," +
                   std::to_string(i) + ",," + std::to_string(8 + (i * 3) % 10) + "," +
                   std::to_string(1 + (i * 5) % 4));
  }
  auto input = write_csv("engine", rows);
  RunConfig cfg;
  cfg.input_path = input.string();
  cfg.out_dir = (input.parent_path() / "out").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);
  // every record got a percentile: group Ns add to 40
  std::size_t n = 0;
  for (const auto& r : result.report.at("indicators")) n += r.at("n").get<std::size_t>();
  CHECK(n == 40);
  // engine warns about the tiny reference set
  bool small_set = false;
  for (const auto& w : result.report.at("warnings"))
    if (w.get<std::string>().find("reference set") != std::string::npos)
      small_set = true;
  CHECK(small_set);
}

TEST_CASE("colored tables differ only by ANSI escapes") {
  RunConfig cfg;
  cfg.input_path = std::string(PCTILE_DATA_DIR) + "/synthetic.csv";
  cfg.out_dir = temp_dir("color").string();
  auto result = run_report(cfg);
  REQUIRE(result.status == RunStatus::ok);
  const auto plain = render_tables(result.report, false);
  auto colored = render_tables(result.report, true);
  CHECK(colored.find("\x1b[1m") != std::string::npos);
  std::string stripped;
  for (std::size_t i = 0; i < colored.size();) {
    if (colored[i] == '\x1b') {
      while (i < colored.size() && colored[i] != 'm') ++i;
      ++i;
    } else {
      stripped += colored[i++];
    }
  }
  CHECK(stripped == plain);
}
