#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pctile {

enum class DocType { article, note, review, other };

inline std::string to_string(DocType t) {
  switch (t) {
    case DocType::article: return "article";
    case DocType::note: return "note";
    case DocType::review: return "review";
    case DocType::other: return "other";
  }
  return "other";
}

inline DocType doc_type_from_string(const std::string& s) {
  if (s == "article") return DocType::article;
  if (s == "note") return DocType::note;
  if (s == "review") return DocType::review;
  return DocType::other;
}

// One publication, possibly credited to several groups.
struct PublicationRecord {
  std::string pub_id;
  std::vector<std::string> groups;    // non-empty
  int year = 0;
  DocType doc_type = DocType::article;
  std::string doc_type_raw;           // original label, kept for "other"
  std::vector<std::string> subjects;  // non-empty
  std::optional<std::int64_t> citations;
  std::optional<double> percentile;   // in (0, 100]
  std::optional<std::int64_t> pages;
  std::optional<std::int64_t> n_authors;
};

struct RowError {
  std::size_t row;  // 1-based, header = row 1
  std::string message;
};

struct Corpus {
  std::vector<PublicationRecord> records;
  // group label -> indices into records (one entry per (pub_id, group) pair)
  std::map<std::string, std::vector<std::size_t>> group_index;
  // pub_id -> all groups sharing that publication (only entries with >1 group)
  std::map<std::string, std::vector<std::string>> duplicate_map;

  std::vector<std::string> group_labels() const {
    std::vector<std::string> out;
    out.reserve(group_index.size());
    for (const auto& [g, _] : group_index) out.push_back(g);
    return out;
  }

  // Number of (pub_id, group) pairs.
  std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.groups.size();
    return n;
  }

  void rebuild_index() {
    group_index.clear();
    duplicate_map.clear();
    std::map<std::string, std::set<std::string>> groups_by_pub;
    for (std::size_t i = 0; i < records.size(); ++i) {
      for (const auto& g : records[i].groups) {
        group_index[g].push_back(i);
        groups_by_pub[records[i].pub_id].insert(g);
      }
    }
    for (auto& [pid, gs] : groups_by_pub)
      if (gs.size() > 1) duplicate_map[pid] = {gs.begin(), gs.end()};
  }
};

struct LoadOptions {
  char delimiter = ',';
  bool fail_fast = false;
};

struct LoadReport {
  Corpus corpus;
  std::vector<RowError> errors;
  std::vector<RowError> warnings;  // e.g. non-standard document types
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_multi(const std::string& cell) {
  std::vector<std::string> out;
  for (auto& part : split(cell, ';')) {
    auto t = trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// Validates one parsed record; returns an error message or empty string.
inline std::string validate_record(const PublicationRecord& r) {
  if (r.pub_id.empty()) return "empty pub_id";
  if (r.groups.empty()) return "no group labels";
  if (r.subjects.empty()) return "no subject labels";
  if (!r.citations && !r.percentile)
    return "neither citations nor percentile present";
  if (r.citations && *r.citations < 0) return "negative citation count";
  if (r.percentile && !(*r.percentile > 0.0 && *r.percentile <= 100.0))
    return "percentile outside (0, 100]";
  if (r.pages && *r.pages < 1) return "pages < 1";
  if (r.n_authors && *r.n_authors < 1) return "n_authors < 1";
  return "";
}

}  // namespace detail

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "pub_id", "group",      "year",  "doc_type", "subject",
      "citations", "percentile", "pages", "n_authors"};
  return cols;
}

// Loads the canonical CSV schema. Rows failing validation are collected into
// the report (or abort the load when fail_fast is set).
inline LoadReport load_csv(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open file: " + path);
  LoadReport rep;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("corpus: empty file: " + path);
  if (!line.empty() && line.front() == '\xEF') line = line.substr(3);  // BOM
  auto header = detail::split(line, opts.delimiter);
  for (auto& h : header) h = detail::trim(h);
  for (const auto& col : csv_columns())
    if (std::find(header.begin(), header.end(), col) == header.end())
      throw std::runtime_error("corpus: missing mandatory column: " + col);
  std::map<std::string, std::size_t> colpos;
  for (std::size_t i = 0; i < header.size(); ++i) colpos[header[i]] = i;

  std::size_t rowno = 1;
  while (std::getline(in, line)) {
    ++rowno;
    if (detail::trim(line).empty()) continue;
    ++rep.rows_read;
    auto cells = detail::split(line, opts.delimiter);
    cells.resize(std::max(cells.size(), header.size()));
    auto cell = [&](const std::string& name) {
      return detail::trim(cells[colpos.at(name)]);
    };
    PublicationRecord r;
    std::string err;
    try {
      r.pub_id = cell("pub_id");
      r.groups = detail::split_multi(cell("group"));
      r.subjects = detail::split_multi(cell("subject"));
      r.year = std::stoi(cell("year"));
      r.doc_type_raw = cell("doc_type");
      r.doc_type = doc_type_from_string(r.doc_type_raw);
      if (auto c = cell("citations"); !c.empty()) r.citations = std::stoll(c);
      if (auto c = cell("percentile"); !c.empty()) r.percentile = std::stod(c);
      if (auto c = cell("pages"); !c.empty()) r.pages = std::stoll(c);
      if (auto c = cell("n_authors"); !c.empty()) r.n_authors = std::stoll(c);
      err = detail::validate_record(r);
    } catch (const std::exception& e) {
      err = std::string("parse failure: ") + e.what();
    }
    if (!err.empty()) {
      ++rep.rows_rejected;
      rep.errors.push_back({rowno, err});
      if (opts.fail_fast)
        throw std::runtime_error("corpus: row " + std::to_string(rowno) + ": " + err);
      continue;
    }
    if (r.doc_type == DocType::other)
      rep.warnings.push_back({rowno, "non-standard document type '" + r.doc_type_raw +
                                         "' (no percentile assigned by InCites)"});
    rep.corpus.records.push_back(std::move(r));
  }
  rep.corpus.rebuild_index();
  return rep;
}

inline nlohmann::json record_to_json(const PublicationRecord& r) {
  nlohmann::json j;
  j["pub_id"] = r.pub_id;
  j["group"] = r.groups;
  j["year"] = r.year;
  j["doc_type"] = r.doc_type == DocType::other ? r.doc_type_raw : to_string(r.doc_type);
  j["subject"] = r.subjects;
  if (r.citations) j["citations"] = *r.citations;
  if (r.percentile) j["percentile"] = *r.percentile;
  if (r.pages) j["pages"] = *r.pages;
  if (r.n_authors) j["n_authors"] = *r.n_authors;
  return j;
}

// JSON mirror of the CSV schema: an array of record objects.
inline LoadReport load_json(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open file: " + path);
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_array()) throw std::runtime_error("corpus: JSON input must be an array");
  LoadReport rep;
  std::size_t idx = 0;
  for (const auto& j : doc) {
    ++idx;
    ++rep.rows_read;
    PublicationRecord r;
    std::string err;
    try {
      r.pub_id = j.at("pub_id").get<std::string>();
      if (j.at("group").is_array())
        r.groups = j.at("group").get<std::vector<std::string>>();
      else
        r.groups = detail::split_multi(j.at("group").get<std::string>());
      if (j.at("subject").is_array())
        r.subjects = j.at("subject").get<std::vector<std::string>>();
      else
        r.subjects = detail::split_multi(j.at("subject").get<std::string>());
      r.year = j.at("year").get<int>();
      r.doc_type_raw = j.at("doc_type").get<std::string>();
      r.doc_type = doc_type_from_string(r.doc_type_raw);
      if (j.contains("citations")) r.citations = j["citations"].get<std::int64_t>();
      if (j.contains("percentile")) r.percentile = j["percentile"].get<double>();
      if (j.contains("pages")) r.pages = j["pages"].get<std::int64_t>();
      if (j.contains("n_authors")) r.n_authors = j["n_authors"].get<std::int64_t>();
      err = detail::validate_record(r);
    } catch (const std::exception& e) {
      err = std::string("parse failure: ") + e.what();
    }
    if (!err.empty()) {
      ++rep.rows_rejected;
      rep.errors.push_back({idx, err});
      if (opts.fail_fast)
        throw std::runtime_error("corpus: record " + std::to_string(idx) + ": " + err);
      continue;
    }
    rep.corpus.records.push_back(std::move(r));
  }
  rep.corpus.rebuild_index();
  return rep;
}

inline void save_csv(const Corpus& corpus, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i];
    return s;
  };
  out.precision(17);
  for (const auto& r : corpus.records) {
    out << r.pub_id << ',' << join(r.groups) << ',' << r.year << ','
        << (r.doc_type == DocType::other ? r.doc_type_raw : to_string(r.doc_type)) << ','
        << join(r.subjects) << ',';
    if (r.citations) out << *r.citations;
    out << ',';
    if (r.percentile) out << *r.percentile;
    out << ',';
    if (r.pages) out << *r.pages;
    out << ',';
    if (r.n_authors) out << *r.n_authors;
    out << '\n';
  }
}

struct RegressionSubsetReport {
  Corpus corpus;
  std::size_t total_pairs = 0;     // (pub_id, group) pairs before filtering
  std::size_t retained_pairs = 0;  // pairs with complete model variables
  std::size_t unique_pubs = 0;     // distinct pub_ids among retained
  bool empty() const { return retained_pairs == 0; }
};

// Keeps only records with percentile, pages and n_authors all present
// (complete cases for the regression model).
inline RegressionSubsetReport regression_subset(const Corpus& corpus) {
  RegressionSubsetReport rep;
  rep.total_pairs = corpus.pair_count();
  std::set<std::string> uniq;
  for (const auto& r : corpus.records) {
    if (r.percentile && r.pages && r.n_authors) {
      rep.corpus.records.push_back(r);
      rep.retained_pairs += r.groups.size();
      uniq.insert(r.pub_id);
    }
  }
  rep.unique_pubs = uniq.size();
  rep.corpus.rebuild_index();
  return rep;
}

struct SummaryTable {
  std::vector<std::string> groups;  // sorted
  std::vector<int> years;           // sorted
  // counts[g][y] per (pub_id, group) pair
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> group_totals;
  std::vector<std::size_t> year_totals;
  std::size_t grand_total = 0;
};

// Group x year cross-tabulation, counted per (pub_id, group) pair.
inline SummaryTable summary_table(const Corpus& corpus) {
  SummaryTable t;
  std::set<int> yearset;
  for (const auto& r : corpus.records) yearset.insert(r.year);
  t.groups = corpus.group_labels();
  t.years = {yearset.begin(), yearset.end()};
  t.counts.assign(t.groups.size(), std::vector<std::size_t>(t.years.size(), 0));
  for (const auto& r : corpus.records) {
    const auto yi = static_cast<std::size_t>(
        std::find(t.years.begin(), t.years.end(), r.year) - t.years.begin());
    for (const auto& g : r.groups) {
      const auto gi = static_cast<std::size_t>(
          std::find(t.groups.begin(), t.groups.end(), g) - t.groups.begin());
      ++t.counts[gi][yi];
    }
  }
  t.group_totals.assign(t.groups.size(), 0);
  t.year_totals.assign(t.years.size(), 0);
  for (std::size_t g = 0; g < t.groups.size(); ++g)
    for (std::size_t y = 0; y < t.years.size(); ++y) {
      t.group_totals[g] += t.counts[g][y];
      t.year_totals[y] += t.counts[g][y];
      t.grand_total += t.counts[g][y];
    }
  return t;
}

// Percentiles of one group, in record order.
inline std::vector<double> group_percentiles(const Corpus& corpus,
                                             const std::string& group) {
  auto it = corpus.group_index.find(group);
  if (it == corpus.group_index.end())
    throw std::invalid_argument("corpus: unknown group: " + group);
  std::vector<double> out;
  for (auto i : it->second)
    if (corpus.records[i].percentile) out.push_back(*corpus.records[i].percentile);
  return out;
}

}  // namespace pctile
