#include "metricsim/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "metricsim/error.hpp"

namespace metricsim {

const char* rating_scale_name(RatingScale s) {
  return s == RatingScale::raw_1_7 ? "raw_1_7" : "unit";
}

const char* provenance_name(Provenance p) {
  return p == Provenance::plain ? "plain" : "contextualized";
}

bool SimilarityDataset::has_groups() const {
  return std::any_of(pairs.begin(), pairs.end(),
                     [](const WordPair& p) { return !p.group.empty(); });
}

std::vector<std::string> SimilarityDataset::groups() const {
  std::vector<std::string> out;
  for (const auto& p : pairs) {
    if (std::find(out.begin(), out.end(), p.group) == out.end()) {
      out.push_back(p.group);
    }
  }
  return out;
}

double rescale_rating(double rating, RatingScale scale) {
  if (scale == RatingScale::raw_1_7) {
    if (rating < 1.0 || rating > 7.0) {
      fail(ErrorCode::range, "rating " + std::to_string(rating) +
                                 " outside the declared 1..7 scale");
    }
    return (rating - 1.0) / 6.0;
  }
  if (rating < 0.0 || rating > 1.0) {
    fail(ErrorCode::range, "rating " + std::to_string(rating) +
                               " outside the declared [0,1] scale");
  }
  return rating;
}

namespace {

std::vector<std::string> split_on(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.push_back("");
  return fields;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_rating(const std::string& token, size_t line_no) {
  const std::string t = trim(token);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() ||
      !std::isfinite(value)) {
    fail(ErrorCode::format,
         "row " + std::to_string(line_no) + ": malformed rating '" + t + "'");
  }
  return value;
}

}  // namespace

SimilarityDataset load_judgments(const std::filesystem::path& path,
                                 RatingScale scale, std::string name,
                                 std::string pos_filter) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::io, "cannot open judgment file " + path.string());
  }

  std::string header;
  if (!std::getline(in, header)) {
    fail(ErrorCode::format, "empty judgment file " + path.string());
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';

  auto header_fields = split_on(header, delim);
  for (auto& f : header_fields) f = normalize_word(f);
  // word1, word2, rating, then any of {group, pos} in either order
  int group_column = -1;
  int pos_column = -1;
  bool header_ok = header_fields.size() >= 3 &&
                   header_fields.size() <= 5 &&
                   header_fields[0] == "word1" &&
                   header_fields[1] == "word2" &&
                   header_fields[2] == "rating";
  for (size_t i = 3; header_ok && i < header_fields.size(); ++i) {
    if (header_fields[i] == "group" && group_column < 0) {
      group_column = static_cast<int>(i);
    } else if (header_fields[i] == "pos" && pos_column < 0) {
      pos_column = static_cast<int>(i);
    } else {
      header_ok = false;
    }
  }
  if (!header_ok) {
    fail(ErrorCode::format,
         "judgment header must be word1,word2,rating[,group][,pos], got '" +
             header + "'");
  }
  if (!pos_filter.empty() && pos_column < 0) {
    fail(ErrorCode::config,
         "pos filter '" + pos_filter + "' needs a pos column in " +
             path.string());
  }
  const std::string pos_wanted = normalize_word(pos_filter);

  SimilarityDataset ds;
  ds.name = name.empty() ? path.stem().string() : std::move(name);

  // Unordered pair -> row number, per group, for duplicate detection.
  std::map<std::string, size_t> seen;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_on(line, delim);
    if (fields.size() != header_fields.size()) {
      fail(ErrorCode::format,
           "row " + std::to_string(line_no) + ": expected " +
               std::to_string(header_fields.size()) + " fields, found " +
               std::to_string(fields.size()));
    }
    if (pos_column >= 0 && !pos_wanted.empty() &&
        normalize_word(fields[static_cast<size_t>(pos_column)]) !=
            pos_wanted) {
      continue;
    }
    WordPair pair;
    pair.word_a = normalize_word(fields[0]);
    pair.word_b = normalize_word(fields[1]);
    if (pair.word_a.empty() || pair.word_b.empty()) {
      fail(ErrorCode::format,
           "row " + std::to_string(line_no) + ": empty word");
    }
    if (pair.word_a == pair.word_b) {
      fail(ErrorCode::integrity, "row " + std::to_string(line_no) +
                                     ": pair of identical words '" +
                                     pair.word_a + "'");
    }
    pair.target = rescale_rating(parse_rating(fields[2], line_no), scale);
    if (group_column >= 0) {
      pair.group = trim(fields[static_cast<size_t>(group_column)]);
    }

    const std::string key =
        pair.group + "\x1f" +
        (pair.word_a < pair.word_b ? pair.word_a + "\x1f" + pair.word_b
                                   : pair.word_b + "\x1f" + pair.word_a);
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      fail(ErrorCode::integrity,
           "row " + std::to_string(line_no) + ": duplicate pair '" +
               pair.word_a + "/" + pair.word_b + "' (first at row " +
               std::to_string(it->second) + ")");
    }
    ds.pairs.push_back(std::move(pair));
  }

  if (ds.pairs.empty()) {
    fail(ErrorCode::format, "no pairs parsed from " + path.string());
  }

  // Correlation needs n >= 2 per group.
  std::map<std::string, int> group_sizes;
  for (const auto& p : ds.pairs) ++group_sizes[p.group];
  for (const auto& [group, count] : group_sizes) {
    if (!group.empty() && count < 2) {
      fail(ErrorCode::integrity,
           "group '" + group + "' has a single pair");
    }
  }
  return ds;
}

std::string DropReport::to_delimited() const {
  std::string out = "word1\tword2\tmissing\n";
  for (const auto& row : rows) {
    out += row.word_a + "\t" + row.word_b + "\t" + row.missing + "\n";
  }
  return out;
}

AlignResult align(const SimilarityDataset& dataset,
                  const EmbeddingStore& store) {
  AlignResult result;
  result.dataset.name = dataset.name;
  result.dataset.provenance = dataset.provenance;
  for (const auto& pair : dataset.pairs) {
    const bool has_a = store.contains(pair.word_a);
    const bool has_b = store.contains(pair.word_b);
    if (has_a && has_b) {
      result.dataset.pairs.push_back(pair);
    } else {
      std::string missing;
      if (!has_a) missing = pair.word_a;
      if (!has_b) missing += (missing.empty() ? "" : " ") + pair.word_b;
      result.dropped.rows.push_back({pair.word_a, pair.word_b, missing});
    }
  }
  if (result.dataset.pairs.empty()) {
    fail(ErrorCode::alignment, "no pair of dataset '" + dataset.name +
                                   "' resolves in embedding store '" +
                                   store.source_name() + "'");
  }
  return result;
}

std::string TableSummary::to_delimited() const {
  std::string out = "group\twords\tpairs\tcomplete\n";
  for (const auto& row : rows) {
    out += row.group + "\t" + std::to_string(row.words) + "\t" +
           std::to_string(row.pairs) + "\t" + (row.complete ? "yes" : "no") +
           "\n";
  }
  return out;
}

TableSummary integrity_check(const SimilarityDataset& dataset) {
  TableSummary summary;
  std::set<std::string> all_words;
  std::map<std::string, std::set<std::string>> group_words;
  std::map<std::string, int> group_pairs;
  for (const auto& p : dataset.pairs) {
    all_words.insert(p.word_a);
    all_words.insert(p.word_b);
    group_words[p.group].insert(p.word_a);
    group_words[p.group].insert(p.word_b);
    ++group_pairs[p.group];
  }
  for (const auto& group : dataset.groups()) {
    const int words = static_cast<int>(group_words[group].size());
    const int pairs = group_pairs[group];
    TableSummary::Row row;
    row.group = group.empty() ? "(none)" : group;
    row.words = words;
    row.pairs = pairs;
    row.complete = pairs == words * (words - 1) / 2;
    summary.rows.push_back(std::move(row));
  }
  const int total_words = static_cast<int>(all_words.size());
  const int total_pairs = static_cast<int>(dataset.pairs.size());
  summary.rows.push_back({"all", total_words, total_pairs,
                          total_pairs == total_words * (total_words - 1) / 2});
  return summary;
}

}  // namespace metricsim
