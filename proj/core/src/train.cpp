#include "metricsim/train.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "metricsim/error.hpp"
#include "metricsim/rng.hpp"

namespace metricsim {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    fail(ErrorCode::config, "learning rate must be positive");
  }
  if (folds < 2) fail(ErrorCode::config, "fold count must be >= 2");
  if (max_epochs < 1) fail(ErrorCode::config, "max_epochs must be >= 1");
  if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 ||
      adam_beta2 >= 1.0) {
    fail(ErrorCode::config, "Adam betas must lie in [0, 1)");
  }
  if (early_stop_patience < 1) {
    fail(ErrorCode::config, "early-stop patience must be >= 1");
  }
}

double mse_loss(std::span<const double> predictions,
                std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    fail(ErrorCode::precondition,
         "mse_loss inputs differ in length: " +
             std::to_string(predictions.size()) + " vs " +
             std::to_string(targets.size()));
  }
  if (predictions.empty()) {
    fail(ErrorCode::precondition, "mse_loss on empty input");
  }
  double sum = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    sum += e * e;
  }
  return sum / static_cast<double>(predictions.size());
}

void adam_step(MetricFactor& factor, const GradientBuffer& grad,
               AdamState& state, const TrainConfig& cfg) {
  if (grad.dim() != factor.dim() ||
      state.m.rows() != factor.entries().rows()) {
    fail(ErrorCode::dimension_mismatch, "Adam buffers disagree in shape");
  }
  if (!grad.entries.allFinite()) {
    fail(ErrorCode::divergence,
         "non-finite gradient at optimizer step " +
             std::to_string(state.t + 1));
  }
  state.t += 1;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  state.m = b1 * state.m + (1.0 - b1) * grad.entries;
  state.v = b2 * state.v + (1.0 - b2) * grad.entries.cwiseProduct(grad.entries);
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double v_corr = 1.0 - std::pow(b2, static_cast<double>(state.t));
  factor.entries().array() -=
      cfg.learning_rate * (state.m.array() / m_corr) /
      ((state.v.array() / v_corr).sqrt() + cfg.adam_eps);
}

TrainLoopController::TrainLoopController(double gate, int patience)
    : gate_(gate), patience_(patience) {}

bool TrainLoopController::observe(int epoch, double val_loss) {
  if (best_epoch_ < 0 || val_loss < best_val_) {
    best_val_ = val_loss;
    best_epoch_ = epoch;
  }
  if (has_prev_) {
    if (val_loss > prev_) {
      // Increases only count once the gate has been crossed by an earlier
      // epoch; the counter resets on any non-increase.
      if (armed_ && ++consecutive_rises_ >= patience_) stopped_ = true;
    } else {
      consecutive_rises_ = 0;
    }
  }
  if (val_loss < gate_) armed_ = true;
  prev_ = val_loss;
  has_prev_ = true;
  return stopped_;
}

namespace {

struct PairIdx {
  int a = 0;
  int b = 0;
  double target = 0.0;
};

struct Problem {
  Eigen::MatrixXd words;  // D x n_words, one column per distinct word
  std::vector<PairIdx> pairs;
  std::vector<std::string> word_names;
};

Problem build_problem(const SimilarityDataset& dataset,
                      const EmbeddingStore& store) {
  Problem prob;
  std::unordered_map<std::string, int> index;
  auto resolve = [&](const std::string& word) {
    auto it = index.find(word);
    if (it != index.end()) return it->second;
    const Eigen::VectorXd* vec = store.find(word);
    if (vec == nullptr) {
      fail(ErrorCode::precondition,
           "word '" + word + "' not in embedding store; align the dataset");
    }
    const int id = static_cast<int>(prob.word_names.size());
    index.emplace(word, id);
    prob.word_names.push_back(word);
    return id;
  };
  std::vector<std::pair<int, int>> resolved;
  resolved.reserve(dataset.pairs.size());
  for (const auto& pair : dataset.pairs) {
    resolved.emplace_back(resolve(pair.word_a), resolve(pair.word_b));
  }
  prob.words.resize(store.dim(), static_cast<int>(prob.word_names.size()));
  for (size_t w = 0; w < prob.word_names.size(); ++w) {
    prob.words.col(static_cast<int>(w)) = *store.find(prob.word_names[w]);
  }
  prob.pairs.reserve(dataset.pairs.size());
  for (size_t i = 0; i < dataset.pairs.size(); ++i) {
    prob.pairs.push_back(
        {resolved[i].first, resolved[i].second, dataset.pairs[i].target});
  }
  return prob;
}

MetricFactor initial_factor(int dim, const TrainConfig& cfg) {
  if (cfg.init_mode == TrainConfig::Init::identity) {
    return MetricFactor::identity(dim);
  }
  Rng rng(cfg.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      m(r, c) = rng.uniform(-bound, bound);
    }
  }
  return MetricFactor(std::move(m));
}

// Losses and gradient for one transformed-word table U = B * words.
// Gradient accumulation groups per-word coefficients first so the O(D^2)
// outer products collapse into a single matrix product.
double subset_loss(const Eigen::MatrixXd& transformed,
                   const Eigen::VectorXd& norms, const Problem& prob,
                   std::span<const int> subset, int epoch,
                   Eigen::MatrixXd* grad_out) {
  const double inv_n = 1.0 / static_cast<double>(subset.size());
  Eigen::MatrixXd coeff;
  if (grad_out != nullptr) {
    coeff = Eigen::MatrixXd::Zero(transformed.rows(), transformed.cols());
  }
  double loss = 0.0;
  for (const int idx : subset) {
    const PairIdx& p = prob.pairs[static_cast<size_t>(idx)];
    const double nu = norms[p.a];
    const double nv = norms[p.b];
    if (nu == 0.0 || nv == 0.0) {
      fail(ErrorCode::divergence,
           "factor projects word '" +
               prob.word_names[static_cast<size_t>(nu == 0.0 ? p.a : p.b)] +
               "' to zero at epoch " + std::to_string(epoch));
    }
    const auto u = transformed.col(p.a);
    const auto v = transformed.col(p.b);
    const double s = u.dot(v) / (nu * nv);
    const double e = s - p.target;
    loss += e * e;
    if (grad_out != nullptr) {
      const double upstream = 2.0 * e * inv_n;
      const double cross = upstream / (nu * nv);
      coeff.col(p.a) += cross * v - (upstream * s / (nu * nu)) * u;
      coeff.col(p.b) += cross * u - (upstream * s / (nv * nv)) * v;
    }
  }
  loss *= inv_n;
  if (!std::isfinite(loss)) {
    fail(ErrorCode::divergence,
         "non-finite loss at epoch " + std::to_string(epoch));
  }
  if (grad_out != nullptr) {
    grad_out->noalias() = coeff * prob.words.transpose();
  }
  return loss;
}

}  // namespace

TrainedModel train_fold(const SimilarityDataset& dataset,
                        const EmbeddingStore& store, const FoldSplit& fold,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (fold.train_pairs.empty() || fold.val_pairs.empty()) {
    fail(ErrorCode::precondition, "fold has an empty train or val set");
  }
  const int n = static_cast<int>(dataset.pairs.size());
  for (const int idx : fold.train_pairs) {
    if (idx < 0 || idx >= n) {
      fail(ErrorCode::precondition, "fold index out of range");
    }
  }
  for (const int idx : fold.val_pairs) {
    if (idx < 0 || idx >= n) {
      fail(ErrorCode::precondition, "fold index out of range");
    }
  }

  const Problem prob = build_problem(dataset, store);
  const int dim = store.dim();

  MetricFactor factor = initial_factor(dim, cfg);
  AdamState adam(dim);
  TrainLoopController controller(cfg.early_stop_loss_gate,
                                 cfg.early_stop_patience);

  TrainedModel model{factor, fold, cfg, 0, false, 0.0, 0.0, {}};

  Eigen::MatrixXd transformed = factor.entries() * prob.words;
  Eigen::VectorXd norms = transformed.colwise().norm();

  // Epoch 0: evaluate the untouched initialization so it competes for the
  // best snapshot.
  double train_loss =
      subset_loss(transformed, norms, prob, fold.train_pairs, 0, nullptr);
  double val_loss =
      subset_loss(transformed, norms, prob, fold.val_pairs, 0, nullptr);
  model.trace.push_back({0, train_loss, val_loss});
  controller.observe(0, val_loss);
  model.best_val_loss = val_loss;

  GradientBuffer grad(dim);
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    // The gradient descends on the loss of the previous epoch's factor.
    train_loss = subset_loss(transformed, norms, prob, fold.train_pairs, epoch,
                             &grad.entries);
    adam_step(factor, grad, adam, cfg);

    transformed.noalias() = factor.entries() * prob.words;
    norms = transformed.colwise().norm();
    val_loss =
        subset_loss(transformed, norms, prob, fold.val_pairs, epoch, nullptr);

    model.trace.push_back({epoch, train_loss, val_loss});
    model.epochs_run = epoch;
    const bool stop = controller.observe(epoch, val_loss);
    if (controller.best_epoch() == epoch) {
      model.factor = factor;
      model.best_val_loss = val_loss;
    }
    if (stop) {
      model.stopped_early = true;
      break;
    }
  }
  model.final_train_loss = train_loss;
  return model;
}

}  // namespace metricsim
