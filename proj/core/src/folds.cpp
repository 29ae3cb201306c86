#include "metricsim/folds.hpp"

#include <algorithm>
#include <numeric>

#include "metricsim/error.hpp"
#include "metricsim/rng.hpp"

namespace metricsim {

std::vector<FoldSplit> make_folds(int n_pairs, int k, uint64_t seed) {
  if (k < 2) {
    fail(ErrorCode::config, "fold count must be >= 2, got " +
                                std::to_string(k));
  }
  if (n_pairs < k) {
    fail(ErrorCode::config, "cannot split " + std::to_string(n_pairs) +
                                " pairs into " + std::to_string(k) +
                                " folds");
  }

  std::vector<int> perm(n_pairs);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(mix_seed(seed, static_cast<uint64_t>(n_pairs),
                   static_cast<uint64_t>(k)));
  for (int i = n_pairs - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.bounded(static_cast<uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }

  std::vector<FoldSplit> folds(k);
  const int base = n_pairs / k;
  const int extra = n_pairs % k;  // first `extra` folds get one more
  int offset = 0;
  for (int i = 0; i < k; ++i) {
    const int size = base + (i < extra ? 1 : 0);
    FoldSplit& fold = folds[i];
    fold.fold_index = i + 1;
    fold.val_pairs.assign(perm.begin() + offset, perm.begin() + offset + size);
    fold.train_pairs.reserve(n_pairs - size);
    fold.train_pairs.insert(fold.train_pairs.end(), perm.begin(),
                            perm.begin() + offset);
    fold.train_pairs.insert(fold.train_pairs.end(),
                            perm.begin() + offset + size, perm.end());
    std::sort(fold.val_pairs.begin(), fold.val_pairs.end());
    std::sort(fold.train_pairs.begin(), fold.train_pairs.end());
    offset += size;
  }
  return folds;
}

std::vector<FoldSplit> make_folds(int n_pairs, int k, uint64_t seed,
                                  std::span<const std::string> group_labels) {
  if (!group_labels.empty() &&
      static_cast<int>(group_labels.size()) != n_pairs) {
    fail(ErrorCode::config, "group label count " +
                                std::to_string(group_labels.size()) +
                                " does not match pair count " +
                                std::to_string(n_pairs));
  }
  return make_folds(n_pairs, k, seed);
}

}  // namespace metricsim
