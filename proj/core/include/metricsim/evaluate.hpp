#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metricsim/train.hpp"

namespace metricsim {

// Correlation of model scores against human targets on one pair set. For
// multi-group sets, r and rho are unweighted means of per-group
// correlations and n is the pooled pair count of the groups used; the
// p-values then use that pooled n (approximation, recorded in output
// metadata).
struct CorrelationReport {
  double r = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  long n = 0;
  double p_r = std::numeric_limits<double>::quiet_NaN();    // NaN when n < 3
  double p_rho = std::numeric_limits<double>::quiet_NaN();  // NaN when n < 3
  int groups_used = 0;  // 0 for ungrouped scoring
};

struct FoldScore {
  int fold_index = 0;
  CorrelationReport report;
};

// Fold-averaged validation scores; model and identity-baseline sides are
// computed on identical pair sets. Aggregate p-values are the medians of
// the per-fold p-values.
struct AggregateScore {
  std::vector<FoldScore> per_fold;
  std::vector<FoldScore> baseline_per_fold;
  std::vector<std::string> diagnostics;  // skipped folds/groups, with reasons

  double mean_r = std::numeric_limits<double>::quiet_NaN();
  double mean_rho = std::numeric_limits<double>::quiet_NaN();
  double p_r = std::numeric_limits<double>::quiet_NaN();
  double p_rho = std::numeric_limits<double>::quiet_NaN();

  double baseline_mean_r = std::numeric_limits<double>::quiet_NaN();
  double baseline_mean_rho = std::numeric_limits<double>::quiet_NaN();
  double baseline_p_r = std::numeric_limits<double>::quiet_NaN();
  double baseline_p_rho = std::numeric_limits<double>::quiet_NaN();
};

// Correlation of predictions vs targets over the given pair indices.
// factor == nullptr scores with the standard cosine (identity metric).
// Groups with fewer than two pairs, or with degenerate variance, are
// excluded and logged in *diagnostics.
CorrelationReport score_pair_set(const SimilarityDataset& dataset,
                                 std::span<const int> indices,
                                 const EmbeddingStore& store,
                                 const MetricFactor* factor,
                                 std::vector<std::string>* diagnostics);

// Per-fold validation scoring of trained models plus the identity baseline
// on the same folds, averaged over folds.
AggregateScore score_validation(const std::vector<TrainedModel>& models,
                                const SimilarityDataset& dataset,
                                const EmbeddingStore& store);

// Identity metric only, no training; same aggregation as score_validation.
AggregateScore baseline_validation(const std::vector<FoldSplit>& folds,
                                   const SimilarityDataset& dataset,
                                   const EmbeddingStore& store);

// Each fold model scores the entire test dataset; scores are averaged over
// the k models. Baseline fields are left empty (see baseline_full).
AggregateScore transfer_test(const std::vector<TrainedModel>& models,
                             const SimilarityDataset& test_dataset,
                             const EmbeddingStore& store);

// Single correlation of standard cosine vs targets over all pairs.
CorrelationReport baseline_full(const SimilarityDataset& test_dataset,
                                const EmbeddingStore& store);

// Per-pair records for external plotting; ordered by group, then original
// pair order. Omitting the factor scores with the standard cosine.
struct DistributionDump {
  struct Row {
    std::string group;
    std::string word_a;
    std::string word_b;
    double human = 0.0;
    double model_score = 0.0;
    double abs_difference = 0.0;
  };
  std::vector<Row> rows;
  std::string to_delimited() const;
};

DistributionDump distribution_dump(const SimilarityDataset& dataset,
                                   const EmbeddingStore& store,
                                   const MetricFactor* factor = nullptr);

}  // namespace metricsim
