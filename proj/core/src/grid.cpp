#include "metricsim/grid.hpp"

#include <atomic>
#include <map>
#include <optional>
#include <thread>

#include "metricsim/error.hpp"
#include "metricsim/rng.hpp"

namespace metricsim {

void GridSpec::validate() const {
  if (learning_rates.empty() || fold_counts.empty()) {
    fail(ErrorCode::config, "hyperparameter grid is empty");
  }
  for (const double lr : learning_rates) {
    if (!(lr > 0.0)) fail(ErrorCode::config, "learning rate must be positive");
  }
  for (const int k : fold_counts) {
    if (k < 2) fail(ErrorCode::config, "fold count must be >= 2");
  }
}

GridResult run_grid(const SimilarityDataset& dataset,
                    const EmbeddingStore& store, const GridSpec& grid,
                    uint64_t seed, const TrainConfig& base_config, int jobs) {
  grid.validate();
  const int n = static_cast<int>(dataset.pairs.size());

  // Splits depend on (n, k, seed) only, so they are shared across learning
  // rates at a fixed k.
  std::vector<std::string> labels;
  if (dataset.has_groups()) {
    labels.reserve(dataset.pairs.size());
    for (const auto& p : dataset.pairs) labels.push_back(p.group);
  }
  // An infeasible fold count (say a dataset shrunk by alignment below k)
  // fails its cells, not the whole grid.
  std::map<int, std::vector<FoldSplit>> folds_by_k;
  std::map<int, std::string> fold_errors;
  for (const int k : grid.fold_counts) {
    try {
      folds_by_k.try_emplace(k, make_folds(n, k, seed, labels));
    } catch (const Error& e) {
      fold_errors.emplace(k, e.what());
    }
  }

  GridResult result;
  struct Job {
    size_t cell = 0;
    int fold = 0;  // 0-based
    TrainConfig cfg;
  };
  std::vector<Job> job_list;
  for (size_t li = 0; li < grid.learning_rates.size(); ++li) {
    for (const int k : grid.fold_counts) {
      GridCell cell;
      cell.learning_rate = grid.learning_rates[li];
      cell.fold_count = k;
      const size_t cell_index = result.cells.size();
      if (auto it = fold_errors.find(k); it != fold_errors.end()) {
        cell.error = it->second;
        result.cells.push_back(std::move(cell));
        continue;
      }
      for (int f = 0; f < k; ++f) {
        TrainConfig cfg = base_config;
        cfg.learning_rate = cell.learning_rate;
        cfg.folds = k;
        cfg.seed = mix_seed(seed, static_cast<uint64_t>(li),
                            static_cast<uint64_t>(k),
                            static_cast<uint64_t>(f));
        job_list.push_back({cell_index, f, cfg});
      }
      result.cells.push_back(std::move(cell));
    }
  }

  std::vector<std::optional<TrainedModel>> trained(job_list.size());
  std::vector<std::string> job_errors(job_list.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= job_list.size()) break;
      const Job& job = job_list[i];
      const GridCell& cell = result.cells[job.cell];
      const auto& folds = folds_by_k.at(cell.fold_count);
      try {
        trained[i] = train_fold(dataset, store,
                                folds[static_cast<size_t>(job.fold)], job.cfg);
      } catch (const std::exception& e) {
        job_errors[i] = "fold " + std::to_string(job.fold + 1) + ": " +
                        e.what();
      }
    }
  };
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Single-writer merge: collect models per cell, then score.
  std::vector<std::vector<std::optional<TrainedModel>>> per_cell(
      result.cells.size());
  for (size_t c = 0; c < result.cells.size(); ++c) {
    per_cell[c].resize(static_cast<size_t>(result.cells[c].fold_count));
  }
  for (size_t i = 0; i < job_list.size(); ++i) {
    const Job& job = job_list[i];
    if (!job_errors[i].empty()) {
      GridCell& cell = result.cells[job.cell];
      if (cell.error.empty()) cell.error = job_errors[i];
      continue;
    }
    per_cell[job.cell][static_cast<size_t>(job.fold)] = std::move(trained[i]);
  }

  for (size_t c = 0; c < result.cells.size(); ++c) {
    GridCell& cell = result.cells[c];
    if (!cell.error.empty()) continue;
    for (auto& model : per_cell[c]) {
      cell.models.push_back(std::move(*model));
    }
    try {
      cell.score = score_validation(cell.models, dataset, store);
      cell.ok = true;
    } catch (const Error& e) {
      cell.error = e.what();
      cell.models.clear();
    }
  }

  for (size_t c = 0; c < result.cells.size(); ++c) {
    const GridCell& cell = result.cells[c];
    if (!cell.ok) continue;
    if (result.best_pearson < 0 ||
        cell.score.mean_r >
            result.cells[static_cast<size_t>(result.best_pearson)]
                .score.mean_r) {
      result.best_pearson = static_cast<int>(c);
    }
    if (result.best_spearman < 0 ||
        cell.score.mean_rho >
            result.cells[static_cast<size_t>(result.best_spearman)]
                .score.mean_rho) {
      result.best_spearman = static_cast<int>(c);
    }
  }
  return result;
}

}  // namespace metricsim
