#pragma once

#include <filesystem>

#include "metricsim/dataset.hpp"
#include "metricsim/metric.hpp"

namespace metricsim {

// Recovery-oracle generator: embeddings are drawn normal around a common
// positive component (mirroring the positive cosine mass of real word
// vectors), a hidden factor with geometrically scaled rows is drawn and
// kept, and the targets are the hidden-metric cosines squashed into [0,1]
// (plus optional clipped Gaussian noise). A trainer that works must be able
// to re-learn the hidden metric from these files.
struct SyntheticSpec {
  int dim = 16;
  int n_words = 40;
  double hidden_factor_scale = 1.0;  // std-dev of the hidden factor entries
  double noise_sigma = 0.0;
  uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  EmbeddingStore store;
  SimilarityDataset dataset;  // all C(n_words, 2) pairs
  MetricFactor hidden_factor;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

struct SyntheticFiles {
  std::filesystem::path embeddings;
  std::filesystem::path judgments;
  std::filesystem::path hidden_factor;
};

// Writes embeddings (text vector format), judgments (unit-scale CSV) and
// the hidden factor (matrix text format) into out_dir. Deterministic for a
// fixed spec.
SyntheticFiles write_synthetic(const SyntheticSpec& spec,
                               const std::filesystem::path& out_dir);

}  // namespace metricsim
