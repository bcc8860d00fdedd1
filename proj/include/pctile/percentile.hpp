#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "pctile/corpus.hpp"

namespace pctile {

// Percentile orientation is smaller-is-better: 100 means uncited.
enum class PercentileScheme { incites_ge, complement_exclusive };

inline std::string to_string(PercentileScheme s) {
  return s == PercentileScheme::incites_ge ? "incites_ge" : "complement_exclusive";
}

struct RefSetKey {
  std::string subject;
  int year = 0;
  DocType doc_type = DocType::article;
  auto operator<=>(const RefSetKey&) const = default;
};

struct ReferenceSet {
  RefSetKey key;
  std::vector<std::int64_t> citation_counts;  // one per member publication
  std::size_t size() const { return citation_counts.size(); }
};

struct PercentileAssignment {
  std::string pub_id;
  double percentile = 0.0;
  RefSetKey refset_key;
  std::size_t refset_size = 0;
  PercentileScheme scheme = PercentileScheme::incites_ge;
};

// One reference set per (subject, year, doc_type) occurring in the corpus.
// A publication with k subjects contributes its citation count to k sets.
inline std::map<RefSetKey, ReferenceSet> build_reference_sets(const Corpus& corpus) {
  std::map<RefSetKey, ReferenceSet> sets;
  bool any = false;
  for (const auto& r : corpus.records) {
    if (!r.citations) continue;
    any = true;
    for (const auto& s : r.subjects) {
      RefSetKey key{s, r.year, r.doc_type};
      auto& set = sets[key];
      set.key = key;
      set.citation_counts.push_back(*r.citations);
    }
  }
  if (!corpus.records.empty() && !any)
    throw std::runtime_error("percentile: corpus has no citation data");
  return sets;
}

// incites_ge: share of the reference set cited at least as often as the
// query (the query's own count being a member), so 0 citations map to 100.
// complement_exclusive: share cited strictly more often; the extreme values
// are 100*(N-1)/N and 0 rather than 100 and 100/N.
inline double assign_percentile(std::int64_t citations, const ReferenceSet& refset,
                                PercentileScheme scheme = PercentileScheme::incites_ge) {
  if (refset.citation_counts.empty())
    throw std::invalid_argument("percentile: empty reference set");
  const auto n = static_cast<double>(refset.size());
  std::size_t count = 0;
  if (scheme == PercentileScheme::incites_ge) {
    for (auto c : refset.citation_counts)
      if (c >= citations) ++count;
  } else {
    for (auto c : refset.citation_counts)
      if (c > citations) ++count;
  }
  return 100.0 * static_cast<double>(count) / n;
}

// Lowest percentile over the publication's subjects; ties break to the
// lexicographically smallest subject label.
inline PercentileAssignment best_subject_percentile(
    const PublicationRecord& pub,
    const std::map<RefSetKey, double>& per_subject,
    const std::map<RefSetKey, std::size_t>& refset_sizes,
    PercentileScheme scheme = PercentileScheme::incites_ge) {
  if (per_subject.empty())
    throw std::invalid_argument("percentile: no subject assignment for " + pub.pub_id);
  PercentileAssignment best;
  best.pub_id = pub.pub_id;
  best.scheme = scheme;
  bool first = true;
  // std::map iterates subjects in lexicographic order, so the first strict
  // minimum wins ties.
  for (const auto& [key, p] : per_subject) {
    if (first || p < best.percentile) {
      best.percentile = p;
      best.refset_key = key;
      best.refset_size = refset_sizes.at(key);
      first = false;
    }
  }
  return best;
}

struct AssignmentRun {
  std::vector<PercentileAssignment> assignments;  // record order
  std::vector<std::string> warnings;              // e.g. small reference sets
};

// Assigns a percentile to every record with a citation count, taking the best
// (lowest) value across the record's subjects.
inline AssignmentRun assign_percentiles(
    const Corpus& corpus, PercentileScheme scheme = PercentileScheme::incites_ge,
    std::size_t small_refset_warning = 100) {
  auto sets = build_reference_sets(corpus);
  AssignmentRun run;
  std::map<RefSetKey, std::size_t> sizes;
  for (const auto& [key, set] : sets) {
    sizes[key] = set.size();
    if (set.size() < small_refset_warning)
      run.warnings.push_back("reference set (" + key.subject + ", " +
                             std::to_string(key.year) + ", " + to_string(key.doc_type) +
                             ") has only " + std::to_string(set.size()) + " members");
  }
  for (const auto& r : corpus.records) {
    if (!r.citations) continue;
    std::map<RefSetKey, double> per_subject;
    for (const auto& s : r.subjects) {
      RefSetKey key{s, r.year, r.doc_type};
      per_subject[key] = assign_percentile(*r.citations, sets.at(key), scheme);
    }
    run.assignments.push_back(best_subject_percentile(r, per_subject, sizes, scheme));
  }
  return run;
}

// Copies assigned percentiles back onto records that lack one; pre-assigned
// percentiles (the InCites export path) are kept. Under the exclusive scheme
// the most cited paper of a set gets 0, which sits outside the (0,100]
// percentile domain; it is nudged to the smallest positive value so the rank
// class machinery still places it in the best class.
inline Corpus with_assigned_percentiles(const Corpus& corpus, const AssignmentRun& run) {
  Corpus out = corpus;
  std::size_t a = 0;
  for (auto& r : out.records) {
    if (!r.citations) continue;
    double p = run.assignments.at(a++).percentile;
    if (r.percentile) continue;
    if (p <= 0.0) p = std::numeric_limits<double>::min();
    r.percentile = p;
  }
  out.rebuild_index();
  return out;
}

}  // namespace pctile
