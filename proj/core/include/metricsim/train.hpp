#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "metricsim/dataset.hpp"
#include "metricsim/folds.hpp"
#include "metricsim/metric.hpp"

namespace metricsim {

struct TrainConfig {
  double learning_rate = 1e-5;
  int folds = 5;
  int max_epochs = 500;
  uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // The patience counter only arms after validation loss first drops below
  // the gate; from then on `patience` consecutive strict increases stop
  // training.
  double early_stop_loss_gate = 0.1;
  int early_stop_patience = 10;
  enum class Init { identity, scaled_uniform } init_mode = Init::scaled_uniform;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 0 is the untouched initial factor
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainedModel {
  MetricFactor factor;  // best-validation snapshot
  FoldSplit fold;
  TrainConfig config;
  int epochs_run = 0;
  bool stopped_early = false;
  double final_train_loss = 0.0;
  double best_val_loss = 0.0;
  std::vector<EpochRecord> trace;
};

// (1/n) sum (p_i - t_i)^2.
double mse_loss(std::span<const double> predictions,
                std::span<const double> targets);

struct AdamState {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
  long t = 0;

  explicit AdamState(int dim)
      : m(Eigen::MatrixXd::Zero(dim, dim)),
        v(Eigen::MatrixXd::Zero(dim, dim)) {}
};

// One bias-corrected Adam update in place. Non-finite gradients abort with
// a divergence error.
void adam_step(MetricFactor& factor, const GradientBuffer& grad,
               AdamState& state, const TrainConfig& cfg);

// Stop/snapshot bookkeeping over a validation-loss sequence. Shared between
// train_fold and scripted-trace tests so the rule has a single home.
class TrainLoopController {
 public:
  TrainLoopController(double gate, int patience);

  // Feed the validation loss observed after `epoch`; returns true when the
  // early-stop rule fires. Epoch 0 is the pre-training evaluation.
  bool observe(int epoch, double val_loss);

  bool gate_armed() const { return armed_; }
  bool stopped_early() const { return stopped_; }
  int best_epoch() const { return best_epoch_; }
  double best_val_loss() const { return best_val_; }

 private:
  double gate_;
  int patience_;
  bool armed_ = false;
  bool stopped_ = false;
  int consecutive_rises_ = 0;
  bool has_prev_ = false;
  double prev_ = 0.0;
  int best_epoch_ = -1;
  double best_val_ = 0.0;
};

// Full-batch training of one fold: forward on all training pairs, MSE,
// analytic backward, Adam, per-epoch validation with early stopping. The
// returned factor is the snapshot with the lowest validation loss observed
// (epoch 0 included).
TrainedModel train_fold(const SimilarityDataset& dataset,
                        const EmbeddingStore& store, const FoldSplit& fold,
                        const TrainConfig& cfg);

}  // namespace metricsim
