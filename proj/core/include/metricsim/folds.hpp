#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace metricsim {

// One of k cross-validation splits. The k validation sets partition the
// pair index range; sizes differ by at most one.
struct FoldSplit {
  int fold_index = 0;  // 1-based
  std::vector<int> train_pairs;
  std::vector<int> val_pairs;
};

// Deterministic for fixed (n_pairs, k, seed): one global Fisher-Yates
// shuffle, chunked into k validation sets.
std::vector<FoldSplit> make_folds(int n_pairs, int k, uint64_t seed);

// Same split; group labels are not stratified on (pairs stay shuffled in
// the global pool, so validation sets mix groups), only validated for size.
std::vector<FoldSplit> make_folds(int n_pairs, int k, uint64_t seed,
                                  std::span<const std::string> group_labels);

}  // namespace metricsim
