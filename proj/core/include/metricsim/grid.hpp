#pragma once

#include "metricsim/evaluate.hpp"

namespace metricsim {

// Hyperparameter grid; defaults are the full search used for the reported
// experiments.
struct GridSpec {
  std::vector<double> learning_rates{1e-5, 1e-6, 1e-7};
  std::vector<int> fold_counts{5, 6, 7};

  void validate() const;
};

struct GridCell {
  double learning_rate = 0.0;
  int fold_count = 0;
  bool ok = false;
  std::string error;                // set when the cell failed
  std::vector<TrainedModel> models; // k models when ok
  AggregateScore score;             // model + baseline, when ok
};

// All cell results, plus the argmax cells by validation correlation. The
// Pearson and Spearman winners are tracked separately since they can
// disagree.
struct GridResult {
  std::vector<GridCell> cells;  // learning-rate major, fold count minor
  int best_pearson = -1;        // index into cells, -1 when nothing scored
  int best_spearman = -1;
};

// Trains k models per (learning rate, fold count) cell on seeded splits
// shared across learning rates, scores validation folds against the
// identity baseline, and selects the argmax cells. Cell failures are
// recorded, not fatal. `jobs` bounds worker threads; results do not depend
// on it.
GridResult run_grid(const SimilarityDataset& dataset,
                    const EmbeddingStore& store, const GridSpec& grid,
                    uint64_t seed, const TrainConfig& base_config = {},
                    int jobs = 1);

}  // namespace metricsim
