#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "metricsim/embedding_store.hpp"

namespace metricsim {

enum class RatingScale { raw_1_7, unit };
enum class Provenance { plain, contextualized };

const char* rating_scale_name(RatingScale s);
const char* provenance_name(Provenance p);

struct WordPair {
  std::string word_a;
  std::string word_b;
  double target = 0.0;   // human similarity, in [0, 1]
  std::string group;     // hypernym label; empty when the dataset has none
};

struct SimilarityDataset {
  std::string name;
  std::vector<WordPair> pairs;
  Provenance provenance = Provenance::plain;

  bool has_groups() const;
  // Distinct group labels in first-appearance order.
  std::vector<std::string> groups() const;
};

// (r - 1)/6 for the 1..7 instrument; identity (validated) for unit scale.
// Out-of-scale ratings raise a range error.
double rescale_rating(double rating, RatingScale scale);

// Delimited text, comma or tab auto-detected from the header row, which is
// required: word1,word2,rating followed by optional group and/or pos
// columns. Words are normalized on load. A non-empty pos_filter keeps only
// rows whose pos column matches it (case-insensitive); the loader itself
// never guesses part of speech.
SimilarityDataset load_judgments(const std::filesystem::path& path,
                                 RatingScale scale, std::string name = "",
                                 std::string pos_filter = "");

struct DropReport {
  struct Row {
    std::string word_a;
    std::string word_b;
    std::string missing;  // the word(s) without a vector
  };
  std::vector<Row> rows;

  bool empty() const { return rows.empty(); }
  std::string to_delimited() const;
};

struct AlignResult {
  SimilarityDataset dataset;
  DropReport dropped;
};

// Restricts the dataset to pairs whose both words resolve in the store,
// preserving order. An empty result is a fatal alignment error.
AlignResult align(const SimilarityDataset& dataset,
                  const EmbeddingStore& store);

struct TableSummary {
  struct Row {
    std::string group;
    int words = 0;
    int pairs = 0;
    bool complete = false;  // pairs == C(words, 2)
  };
  std::vector<Row> rows;  // per group, plus a trailing "all" row
  std::string to_delimited() const;
};

// Per-group word and pair counts; informational, never fails.
TableSummary integrity_check(const SimilarityDataset& dataset);

}  // namespace metricsim
