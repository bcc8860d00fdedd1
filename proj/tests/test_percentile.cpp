#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pctile/percentile.hpp"

using namespace pctile;

namespace {

ReferenceSet make_refset(std::vector<std::int64_t> counts) {
  ReferenceSet s;
  s.key = {"CHEM", 2005, DocType::article};
  s.citation_counts = std::move(counts);
  return s;
}

// Brute-force oracle: percentile as a direct count over the multiset.
double oracle_ge(std::int64_t q, const std::vector<std::int64_t>& counts) {
  std::size_t k = 0;
  for (auto c : counts)
    if (c >= q) ++k;
  return 100.0 * static_cast<double>(k) / static_cast<double>(counts.size());
}

}  // namespace

TEST_CASE("incites_ge examples") {
  auto s = make_refset({5, 3, 3, 1, 0});
  CHECK(assign_percentile(3, s) == doctest::Approx(60.0));
  CHECK(assign_percentile(5, s) == doctest::Approx(20.0));
  CHECK(assign_percentile(0, s) == doctest::Approx(100.0));

  auto zeros = make_refset({0, 0, 0, 0});
  CHECK(assign_percentile(0, zeros) == doctest::Approx(100.0));

  // ten distinct counts, top queried
  auto ten = make_refset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(assign_percentile(10, ten) == doctest::Approx(10.0));

  CHECK_THROWS(assign_percentile(3, make_refset({})));
}

TEST_CASE("scheme agreement: distinct counts differ by exactly 100/N") {
  for (std::size_t n = 1; n <= 20; ++n) {
    std::vector<std::int64_t> counts;
    for (std::size_t i = 0; i < n; ++i) counts.push_back(static_cast<std::int64_t>(i * 3));
    auto s = make_refset(counts);
    for (auto q : counts) {
      const double ge = assign_percentile(q, s, PercentileScheme::incites_ge);
      const double ce = assign_percentile(q, s, PercentileScheme::complement_exclusive);
      CHECK(ge - ce == doctest::Approx(100.0 / static_cast<double>(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("randomized properties against the brute-force oracle") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<std::size_t> size_dist(1, 50);
  std::uniform_int_distribution<std::int64_t> cit_dist(0, 30);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto n = size_dist(rng);
    std::vector<std::int64_t> counts(n);
    for (auto& c : counts) c = cit_dist(rng);
    auto s = make_refset(counts);
    for (auto q : counts) {
      const double p = assign_percentile(q, s);
      CHECK(p == doctest::Approx(oracle_ge(q, counts)).epsilon(1e-12));
      // range property: p in {100k/N : k=1..N}
      const double k = p * static_cast<double>(n) / 100.0;
      CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-9));
      CHECK(k >= 1.0 - 1e-9);
    }
    // monotonicity and tie equality
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
      const double pi = assign_percentile(counts[i], s);
      const double pj = assign_percentile(counts[i + 1], s);
      if (counts[i] > counts[i + 1]) CHECK(pi <= pj);
      if (counts[i] == counts[i + 1]) CHECK(pi == pj);
    }
  }
}

TEST_CASE("adding a lower-cited publication never raises a percentile") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<std::int64_t> cit_dist(0, 20);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::int64_t> counts(10);
    for (auto& c : counts) c = cit_dist(rng);
    const std::int64_t q = cit_dist(rng) + 1;
    auto before = make_refset(counts);
    const std::size_t num_before = static_cast<std::size_t>(
        assign_percentile(q, before) * static_cast<double>(counts.size()) / 100.0 + 0.5);
    counts.push_back(q - 1);  // strictly fewer citations than the query
    auto after = make_refset(counts);
    const std::size_t num_after = static_cast<std::size_t>(
        assign_percentile(q, after) * static_cast<double>(counts.size()) / 100.0 + 0.5);
    CHECK(num_after == num_before);
  }
}

TEST_CASE("reference set construction") {
  Corpus corpus;
  PublicationRecord r1{"p1", {"UnivA"}, 2005, DocType::article, "article",
                       {"A", "B"},      {},   {},               {}, {}};
  r1.citations = 4;
  PublicationRecord r2 = r1;
  r2.pub_id = "p2";
  r2.subjects = {"A"};
  r2.citations = 9;
  corpus.records = {r1, r2};
  corpus.rebuild_index();
  auto sets = build_reference_sets(corpus);
  REQUIRE(sets.size() == 2);
  CHECK(sets.at({"A", 2005, DocType::article}).size() == 2);
  CHECK(sets.at({"B", 2005, DocType::article}).size() == 1);

  Corpus empty;
  CHECK(build_reference_sets(empty).empty());

  Corpus no_cits;
  PublicationRecord r3 = r1;
  r3.citations.reset();
  r3.percentile = 40.0;
  no_cits.records = {r3};
  no_cits.rebuild_index();
  CHECK_THROWS(build_reference_sets(no_cits));
}

TEST_CASE("best subject percentile takes the minimum, ties break lexicographically") {
  PublicationRecord pub{"p1", {"UnivA"}, 2005, DocType::article, "article",
                        {"A", "B"},      {},   {},               {}, {}};
  std::map<RefSetKey, double> per_subject{
      {{"A", 2005, DocType::article}, 40.0}, {{"B", 2005, DocType::article}, 12.0}};
  std::map<RefSetKey, std::size_t> sizes{
      {{"A", 2005, DocType::article}, 100}, {{"B", 2005, DocType::article}, 200}};
  auto best = best_subject_percentile(pub, per_subject, sizes);
  CHECK(best.percentile == 12.0);
  CHECK(best.refset_key.subject == "B");
  CHECK(best.refset_size == 200);

  per_subject[{"A", 2005, DocType::article}] = 12.0;
  auto tie = best_subject_percentile(pub, per_subject, sizes);
  CHECK(tie.refset_key.subject == "A");

  std::map<RefSetKey, double> single{{{"A", 2005, DocType::article}, 77.0}};
  CHECK(best_subject_percentile(pub, single, sizes).percentile == 77.0);

  CHECK_THROWS(best_subject_percentile(pub, {}, sizes));
}

TEST_CASE("end-to-end assignment over a corpus") {
  Corpus corpus;
  for (int i = 0; i < 5; ++i) {
    PublicationRecord r{"p" + std::to_string(i), {"UnivA"}, 2005, DocType::article,
                        "article", {"A"}, {}, {}, {}, {}};
    r.citations = i;
    corpus.records.push_back(r);
  }
  corpus.rebuild_index();
  auto run = assign_percentiles(corpus);
  REQUIRE(run.assignments.size() == 5);
  CHECK(run.assignments[0].percentile == doctest::Approx(100.0));  // 0 citations
  CHECK(run.assignments[4].percentile == doctest::Approx(20.0));   // top of 5
  CHECK_FALSE(run.warnings.empty());  // small reference set warning

  auto with = with_assigned_percentiles(corpus, run);
  for (const auto& r : with.records) CHECK(r.percentile.has_value());
}
