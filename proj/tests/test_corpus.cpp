#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pctile/corpus.hpp"

using namespace pctile;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream f(p);
  f << content;
  return p;
}

const std::string kHeader = "pub_id,group,year,doc_type,subject,citations,percentile,pages,n_authors\n";

}  // namespace

TEST_CASE("basic row parsing") {
  auto p = write_temp("corpus_basic.csv", kHeader + "p1,UnivA,2005,article,CHEM,12,,8,3\n");
  auto rep = load_csv(p.string());
  REQUIRE(rep.corpus.records.size() == 1);
  const auto& r = rep.corpus.records[0];
  CHECK(r.pub_id == "p1");
  CHECK(r.groups == std::vector<std::string>{"UnivA"});
  CHECK(r.year == 2005);
  CHECK(r.citations == 12);
  CHECK_FALSE(r.percentile.has_value());
  CHECK(r.pages == 8);
  CHECK(r.n_authors == 3);
}

TEST_CASE("percentile zero is rejected") {
  auto p = write_temp("corpus_zero.csv", kHeader + "p1,UnivA,2005,article,CHEM,,0,8,3\n");
  auto rep = load_csv(p.string());
  CHECK(rep.corpus.records.empty());
  REQUIRE(rep.errors.size() == 1);
  CHECK(rep.errors[0].row == 2);
  CHECK(rep.rows_rejected == 1);
}

TEST_CASE("row with neither citations nor percentile is rejected") {
  auto p = write_temp("corpus_empty.csv", kHeader + "p1,UnivA,2005,article,CHEM,,,8,3\n");
  auto rep = load_csv(p.string());
  CHECK(rep.corpus.records.empty());
  REQUIRE(rep.errors.size() == 1);
  LoadOptions ff;
  ff.fail_fast = true;
  CHECK_THROWS(load_csv(p.string(), ff));
}

TEST_CASE("missing mandatory column") {
  auto p = write_temp("corpus_nocol.csv",
                      "pub_id,group,year,doc_type,subject,citations,percentile,pages\n");
  CHECK_THROWS_WITH(load_csv(p.string()),
                    doctest::Contains("missing mandatory column"));
  CHECK_THROWS(load_csv("/nonexistent/file.csv"));
}

TEST_CASE("duplicate pub_id across groups builds the duplicate map") {
  auto p = write_temp("corpus_dup.csv", kHeader +
                                            "p1,UnivA,2005,article,CHEM,5,,,\n"
                                            "p1,UnivB,2005,article,CHEM,5,,,\n"
                                            "p2,UnivA;UnivC,2006,article,BIO,,40.0,,\n");
  auto rep = load_csv(p.string());
  REQUIRE(rep.corpus.records.size() == 3);
  REQUIRE(rep.corpus.duplicate_map.count("p1") == 1);
  CHECK(rep.corpus.duplicate_map.at("p1") == std::vector<std::string>{"UnivA", "UnivB"});
  CHECK(rep.corpus.duplicate_map.at("p2") == std::vector<std::string>{"UnivA", "UnivC"});
  CHECK(rep.corpus.pair_count() == 4);
}

TEST_CASE("non-standard document types are flagged, not rejected") {
  auto p = write_temp("corpus_doc.csv", kHeader + "p1,UnivA,2005,letter,CHEM,3,,,\n");
  auto rep = load_csv(p.string());
  CHECK(rep.corpus.records.size() == 1);
  CHECK(rep.corpus.records[0].doc_type == DocType::other);
  CHECK(rep.warnings.size() == 1);
}

TEST_CASE("regression_subset keeps complete cases") {
  auto p = write_temp("corpus_sub.csv", kHeader +
                                            "p1,UnivA,2005,article,CHEM,,40.0,8,3\n"
                                            "p2,UnivA,2005,article,CHEM,,50.0,,3\n"
                                            "p3,UnivB,2005,article,CHEM,,60.0,4,2\n");
  auto rep = load_csv(p.string());
  auto sub = regression_subset(rep.corpus);
  CHECK(sub.total_pairs == 3);
  CHECK(sub.retained_pairs == 2);
  CHECK(sub.unique_pubs == 2);
  CHECK(sub.corpus.records.size() == 2);

  SUBCASE("idempotent") {
    auto again = regression_subset(sub.corpus);
    CHECK(again.retained_pairs == sub.retained_pairs);
    CHECK(again.corpus.records.size() == sub.corpus.records.size());
  }
  SUBCASE("identity on complete corpora") {
    auto full = load_csv(write_temp("corpus_full.csv",
                                    kHeader + "p1,UnivA,2005,article,CHEM,,40.0,8,3\n")
                             .string());
    auto s = regression_subset(full.corpus);
    CHECK(s.retained_pairs == s.total_pairs);
  }
  SUBCASE("empty result allowed and flagged") {
    auto none = load_csv(
        write_temp("corpus_none.csv", kHeader + "p1,UnivA,2005,article,CHEM,7,,,\n")
            .string());
    auto s = regression_subset(none.corpus);
    CHECK(s.empty());
  }
}

TEST_CASE("summary_table counts and totals") {
  auto p = write_temp("corpus_tab.csv", kHeader +
                                            "p1,UnivA,2005,article,CHEM,,40,,\n"
                                            "p2,UnivA,2005,article,CHEM,,41,,\n"
                                            "p3,UnivA,2005,article,CHEM,,42,,\n"
                                            "p4,UnivB,2005,article,CHEM,,43,,\n"
                                            "p5,UnivB,2005,article,CHEM,,44,,\n"
                                            "p6,UnivB,2005,article,CHEM,,45,,\n"
                                            "p7,UnivB,2005,article,CHEM,,46,,\n");
  auto t = summary_table(load_csv(p.string()).corpus);
  CHECK(t.groups == std::vector<std::string>{"UnivA", "UnivB"});
  CHECK(t.group_totals == std::vector<std::size_t>{3, 4});
  CHECK(t.grand_total == 7);
  // row totals sum to the grand total
  std::size_t s = 0;
  for (auto g : t.group_totals) s += g;
  CHECK(s == t.grand_total);

  auto empty = summary_table(Corpus{});
  CHECK(empty.grand_total == 0);
}

TEST_CASE("ingest -> serialize -> ingest round-trips") {
  auto p = write_temp("corpus_rt.csv", kHeader +
                                           "p1,UnivA;UnivB,2005,article,CHEM;BIO,12,40.25,8,3\n"
                                           "p2,UnivC,2007,review,MED,,99.99,,\n");
  auto first = load_csv(p.string());
  std::ostringstream out;
  save_csv(first.corpus, out);
  auto p2 = write_temp("corpus_rt2.csv", out.str());
  auto second = load_csv(p2.string());
  REQUIRE(second.corpus.records.size() == first.corpus.records.size());
  for (std::size_t i = 0; i < first.corpus.records.size(); ++i) {
    const auto& a = first.corpus.records[i];
    const auto& b = second.corpus.records[i];
    CHECK(a.pub_id == b.pub_id);
    CHECK(a.groups == b.groups);
    CHECK(a.subjects == b.subjects);
    CHECK(a.year == b.year);
    CHECK(a.citations == b.citations);
    CHECK(a.percentile == b.percentile);
    CHECK(a.pages == b.pages);
    CHECK(a.n_authors == b.n_authors);
  }
}

TEST_CASE("JSON mirror of the schema") {
  auto p = write_temp("corpus.json", R"([
    {"pub_id":"p1","group":["UnivA"],"year":2005,"doc_type":"article",
     "subject":["CHEM"],"citations":12,"pages":8,"n_authors":3},
    {"pub_id":"p2","group":"UnivA;UnivB","year":2006,"doc_type":"article",
     "subject":"BIO","percentile":12.5}
  ])");
  auto rep = load_json(p.string());
  REQUIRE(rep.corpus.records.size() == 2);
  CHECK(rep.corpus.records[1].groups == std::vector<std::string>{"UnivA", "UnivB"});
  CHECK(rep.corpus.records[1].percentile == 12.5);
}
