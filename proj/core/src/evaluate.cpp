#include "metricsim/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "metricsim/error.hpp"
#include "metricsim/stats.hpp"

namespace metricsim {

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

// Median of the defined (non-NaN) values.
double median_of(std::vector<double> xs) {
  xs.erase(std::remove_if(xs.begin(), xs.end(),
                          [](double v) { return std::isnan(v); }),
           xs.end());
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

const Eigen::VectorXd& lookup(const EmbeddingStore& store,
                              const std::string& word) {
  const Eigen::VectorXd* vec = store.find(word);
  if (vec == nullptr) {
    fail(ErrorCode::precondition,
         "word '" + word + "' not in embedding store; align the dataset");
  }
  return *vec;
}

double predict(const SimilarityDataset& dataset, int pair_index,
               const EmbeddingStore& store, const MetricFactor* factor) {
  const WordPair& pair = dataset.pairs[static_cast<size_t>(pair_index)];
  const Embedding a{pair.word_a, lookup(store, pair.word_a)};
  const Embedding b{pair.word_b, lookup(store, pair.word_b)};
  return factor == nullptr ? cosine(a, b) : metric_cosine(a, b, *factor);
}

struct Column {
  std::vector<double> predictions;
  std::vector<double> targets;
};

void note(std::vector<std::string>* diagnostics, std::string message) {
  if (diagnostics != nullptr) diagnostics->push_back(std::move(message));
}

}  // namespace

CorrelationReport score_pair_set(const SimilarityDataset& dataset,
                                 std::span<const int> indices,
                                 const EmbeddingStore& store,
                                 const MetricFactor* factor,
                                 std::vector<std::string>* diagnostics) {
  if (indices.size() < 2) {
    fail(ErrorCode::undefined_correlation,
         "need at least 2 pairs to correlate, got " +
             std::to_string(indices.size()));
  }

  // Bucket by group, preserving pair order. Ungrouped pairs share the ""
  // bucket.
  std::map<std::string, Column> by_group;
  std::vector<std::string> group_order;
  for (const int idx : indices) {
    const WordPair& pair = dataset.pairs[static_cast<size_t>(idx)];
    auto [it, inserted] = by_group.try_emplace(pair.group);
    if (inserted) group_order.push_back(pair.group);
    it->second.predictions.push_back(predict(dataset, idx, store, factor));
    it->second.targets.push_back(pair.target);
  }

  CorrelationReport report;
  if (by_group.size() == 1) {
    const Column& col = by_group.begin()->second;
    report.r = pearson(col.predictions, col.targets);
    report.rho = spearman(col.predictions, col.targets);
    report.n = static_cast<long>(col.predictions.size());
    report.groups_used = 0;
  } else {
    // Per-group correlation, then the unweighted mean over groups present.
    std::vector<double> rs, rhos;
    long pooled_n = 0;
    for (const auto& group : group_order) {
      const Column& col = by_group.at(group);
      if (col.predictions.size() < 2) {
        note(diagnostics, "group '" + group + "': only " +
                              std::to_string(col.predictions.size()) +
                              " pair(s), excluded");
        continue;
      }
      try {
        const double r = pearson(col.predictions, col.targets);
        const double rho = spearman(col.predictions, col.targets);
        rs.push_back(r);
        rhos.push_back(rho);
        pooled_n += static_cast<long>(col.predictions.size());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::undefined_correlation) throw;
        note(diagnostics, "group '" + group + "': " + e.what());
      }
    }
    if (rs.empty()) {
      fail(ErrorCode::undefined_correlation,
           "no group with a defined correlation");
    }
    report.r = mean_of(rs);
    report.rho = mean_of(rhos);
    report.n = pooled_n;
    report.groups_used = static_cast<int>(rs.size());
  }
  if (report.n >= 3) {
    report.p_r = significance(report.r, report.n);
    report.p_rho = significance(report.rho, report.n);
  }
  return report;
}

namespace {

struct ScoredSide {
  std::vector<FoldScore> per_fold;
  double mean_r = std::numeric_limits<double>::quiet_NaN();
  double mean_rho = std::numeric_limits<double>::quiet_NaN();
  double p_r = std::numeric_limits<double>::quiet_NaN();
  double p_rho = std::numeric_limits<double>::quiet_NaN();

  void recompute_means() {
    std::vector<double> rs, rhos, prs, prhos;
    for (const auto& fold : per_fold) {
      rs.push_back(fold.report.r);
      rhos.push_back(fold.report.rho);
      prs.push_back(fold.report.p_r);
      prhos.push_back(fold.report.p_rho);
    }
    mean_r = mean_of(rs);
    mean_rho = mean_of(rhos);
    p_r = median_of(prs);
    p_rho = median_of(prhos);
  }
};

// Scores (fold_index, indices, factor) jobs, skipping folds whose
// correlation is undefined and recording why.
ScoredSide score_side(
    const SimilarityDataset& dataset, const EmbeddingStore& store,
    const std::vector<std::tuple<int, std::span<const int>, const MetricFactor*>>&
        jobs,
    std::vector<std::string>& diagnostics) {
  ScoredSide side;
  for (const auto& [fold_index, indices, factor] : jobs) {
    try {
      const CorrelationReport rep =
          score_pair_set(dataset, indices, store, factor, &diagnostics);
      side.per_fold.push_back({fold_index, rep});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::undefined_correlation &&
          e.code() != ErrorCode::degenerate_projection) {
        throw;
      }
      diagnostics.push_back("fold " + std::to_string(fold_index) +
                            " skipped: " + e.what());
    }
  }
  if (side.per_fold.empty()) {
    fail(ErrorCode::undefined_correlation,
         "every fold was skipped: " +
             (diagnostics.empty() ? std::string("no detail")
                                  : diagnostics.back()));
  }
  side.recompute_means();
  return side;
}

}  // namespace

AggregateScore score_validation(const std::vector<TrainedModel>& models,
                                const SimilarityDataset& dataset,
                                const EmbeddingStore& store) {
  if (models.empty()) {
    fail(ErrorCode::precondition, "score_validation needs at least one model");
  }
  AggregateScore agg;
  std::vector<std::tuple<int, std::span<const int>, const MetricFactor*>> jobs;
  jobs.reserve(models.size());
  for (const auto& model : models) {
    jobs.emplace_back(model.fold.fold_index, model.fold.val_pairs,
                      &model.factor);
  }
  ScoredSide model_side = score_side(dataset, store, jobs, agg.diagnostics);

  // Identity baseline on the very same validation sets.
  for (auto& job : jobs) std::get<2>(job) = nullptr;
  ScoredSide base_side = score_side(dataset, store, jobs, agg.diagnostics);

  // Both means must average the same folds; a fold that scored on only one
  // side (say a degenerate trained factor, or constant baseline
  // predictions) drops from the aggregate on both sides, with a note.
  if (model_side.per_fold.size() != base_side.per_fold.size() ||
      !std::equal(model_side.per_fold.begin(), model_side.per_fold.end(),
                  base_side.per_fold.begin(),
                  [](const FoldScore& a, const FoldScore& b) {
                    return a.fold_index == b.fold_index;
                  })) {
    auto scored_on = [](const ScoredSide& side, int fold_index) {
      return std::any_of(side.per_fold.begin(), side.per_fold.end(),
                         [&](const FoldScore& f) {
                           return f.fold_index == fold_index;
                         });
    };
    auto restrict_to = [&](ScoredSide& side, const ScoredSide& other) {
      std::vector<FoldScore> kept;
      for (auto& fold : side.per_fold) {
        if (scored_on(other, fold.fold_index)) {
          kept.push_back(std::move(fold));
        } else {
          agg.diagnostics.push_back(
              "fold " + std::to_string(fold.fold_index) +
              " excluded from the aggregate: scored on one side only");
        }
      }
      side.per_fold = std::move(kept);
    };
    restrict_to(model_side, base_side);
    restrict_to(base_side, model_side);
    if (model_side.per_fold.empty()) {
      fail(ErrorCode::undefined_correlation,
           "no fold scored on both the model and the baseline side");
    }
    model_side.recompute_means();
    base_side.recompute_means();
  }

  agg.per_fold = model_side.per_fold;
  agg.mean_r = model_side.mean_r;
  agg.mean_rho = model_side.mean_rho;
  agg.p_r = model_side.p_r;
  agg.p_rho = model_side.p_rho;
  agg.baseline_per_fold = base_side.per_fold;
  agg.baseline_mean_r = base_side.mean_r;
  agg.baseline_mean_rho = base_side.mean_rho;
  agg.baseline_p_r = base_side.p_r;
  agg.baseline_p_rho = base_side.p_rho;
  return agg;
}

AggregateScore baseline_validation(const std::vector<FoldSplit>& folds,
                                   const SimilarityDataset& dataset,
                                   const EmbeddingStore& store) {
  if (folds.empty()) {
    fail(ErrorCode::precondition, "baseline_validation needs folds");
  }
  AggregateScore agg;
  std::vector<std::tuple<int, std::span<const int>, const MetricFactor*>> jobs;
  jobs.reserve(folds.size());
  for (const auto& fold : folds) {
    jobs.emplace_back(fold.fold_index, fold.val_pairs, nullptr);
  }
  const ScoredSide side = score_side(dataset, store, jobs, agg.diagnostics);
  agg.per_fold = side.per_fold;
  agg.baseline_per_fold = side.per_fold;
  agg.mean_r = agg.baseline_mean_r = side.mean_r;
  agg.mean_rho = agg.baseline_mean_rho = side.mean_rho;
  agg.p_r = agg.baseline_p_r = side.p_r;
  agg.p_rho = agg.baseline_p_rho = side.p_rho;
  return agg;
}

AggregateScore transfer_test(const std::vector<TrainedModel>& models,
                             const SimilarityDataset& test_dataset,
                             const EmbeddingStore& store) {
  if (models.empty()) {
    fail(ErrorCode::precondition, "transfer_test needs at least one model");
  }
  std::vector<int> all(test_dataset.pairs.size());
  std::iota(all.begin(), all.end(), 0);

  AggregateScore agg;
  std::vector<std::tuple<int, std::span<const int>, const MetricFactor*>> jobs;
  jobs.reserve(models.size());
  for (const auto& model : models) {
    jobs.emplace_back(model.fold.fold_index, std::span<const int>(all),
                      &model.factor);
  }
  const ScoredSide side = score_side(test_dataset, store, jobs, agg.diagnostics);
  agg.per_fold = side.per_fold;
  agg.mean_r = side.mean_r;
  agg.mean_rho = side.mean_rho;
  agg.p_r = side.p_r;
  agg.p_rho = side.p_rho;
  return agg;
}

CorrelationReport baseline_full(const SimilarityDataset& test_dataset,
                                const EmbeddingStore& store) {
  std::vector<int> all(test_dataset.pairs.size());
  std::iota(all.begin(), all.end(), 0);
  return score_pair_set(test_dataset, all, store, nullptr, nullptr);
}

std::string DistributionDump::to_delimited() const {
  std::string out = "group\tword1\tword2\thuman\tmodel\tabs_difference\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g", row.human,
                  row.model_score, row.abs_difference);
    out += (row.group.empty() ? "(none)" : row.group) + "\t" + row.word_a +
           "\t" + row.word_b + "\t" + buf + "\n";
  }
  return out;
}

DistributionDump distribution_dump(const SimilarityDataset& dataset,
                                   const EmbeddingStore& store,
                                   const MetricFactor* factor) {
  DistributionDump dump;
  dump.rows.reserve(dataset.pairs.size());
  for (size_t i = 0; i < dataset.pairs.size(); ++i) {
    const WordPair& pair = dataset.pairs[i];
    const double score =
        predict(dataset, static_cast<int>(i), store, factor);
    dump.rows.push_back({pair.group, pair.word_a, pair.word_b, pair.target,
                         score, std::fabs(pair.target - score)});
  }
  std::stable_sort(dump.rows.begin(), dump.rows.end(),
                   [](const DistributionDump::Row& a,
                      const DistributionDump::Row& b) {
                     return a.group < b.group;
                   });
  return dump;
}

}  // namespace metricsim
