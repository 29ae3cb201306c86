#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metricsim/metric.hpp"

namespace metricsim {

// Lowercase + trim; applied to every word on both the embedding and the
// judgment side so lookups are exact-match on the normalized form.
std::string normalize_word(std::string_view word);

// Map word -> vector, all vectors sharing one dimension. The dimension is
// adopted from the first insert; later mismatches are structural errors.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::string source_name)
      : source_name_(std::move(source_name)) {}

  int dim() const { return dim_; }
  const std::string& source_name() const { return source_name_; }
  size_t size() const { return map_.size(); }

  // Word must already be normalized and the vector validated; returns false
  // on a duplicate key.
  bool insert(std::string word, Eigen::VectorXd vec);

  bool contains(std::string_view word) const;
  const Eigen::VectorXd* find(std::string_view word) const;

  // Lexicographically sorted vocabulary, for deterministic serialization.
  std::vector<std::string> words_sorted() const;

 private:
  int dim_ = 0;
  std::string source_name_;
  std::unordered_map<std::string, Eigen::VectorXd> map_;
};

struct EmbeddingLoadStats {
  size_t lines = 0;               // non-empty data lines seen
  size_t parsed = 0;              // entries stored
  size_t skipped_duplicate = 0;   // repeated word after normalization
  size_t skipped_zero_norm = 0;   // well-formed but zero-norm vectors
  bool count_header_skipped = false;  // word2vec-style "<count> <dim>" line
};

struct EmbeddingLoadResult {
  EmbeddingStore store;
  EmbeddingLoadStats stats;
};

// Text vector format: "<word> <v1> ... <vD>\n", UTF-8, space-separated
// decimal floats. A leading two-token numeric count header is tolerated.
// Inconsistent dimension, malformed or non-finite numbers and empty files
// are format errors naming the offending line.
EmbeddingLoadResult load_embeddings_text(const std::filesystem::path& path,
                                         std::optional<int> expected_dim = {});

// Writes the store in the same format, words sorted, full precision.
void write_embeddings_text(const std::filesystem::path& path,
                           const EmbeddingStore& store);

}  // namespace metricsim
