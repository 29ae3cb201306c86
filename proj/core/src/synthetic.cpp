#include "metricsim/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "metricsim/error.hpp"
#include "metricsim/matrix_io.hpp"
#include "metricsim/rng.hpp"

namespace metricsim {

void SyntheticSpec::validate() const {
  if (dim < 2) fail(ErrorCode::config, "synthetic dim must be >= 2");
  if (n_words < 3) fail(ErrorCode::config, "synthetic n_words must be >= 3");
  if (noise_sigma < 0.0) {
    fail(ErrorCode::config, "noise sigma must be non-negative");
  }
  if (!(hidden_factor_scale > 0.0)) {
    fail(ErrorCode::config, "hidden factor scale must be positive");
  }
}

namespace {

// Embeddings carry a common positive component so pairwise cosines occupy
// the positive band the squashed targets live in; without it the MSE
// optimum is a collapsed constant predictor and nothing is recoverable.
constexpr double kCommonComponent = 0.5;

// Geometric row scaling of the hidden factor keeps its metric far from the
// identity, so the standard-cosine baseline leaves room for recovery.
constexpr double kRowDecay = 0.7;

std::string word_name(int index, int n_words) {
  int width = 1;
  for (int v = n_words - 1; v >= 10; v /= 10) ++width;
  width = std::clamp(width, 3, 10);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "w%0*d", width, index);
  return buf;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();

  Rng embedding_rng(mix_seed(spec.seed, 1));
  Rng factor_rng(mix_seed(spec.seed, 2));
  Rng noise_rng(mix_seed(spec.seed, 3));

  std::vector<Embedding> words;
  words.reserve(static_cast<size_t>(spec.n_words));
  EmbeddingStore store("synthetic");
  for (int w = 0; w < spec.n_words; ++w) {
    Eigen::VectorXd vec(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      vec[i] = kCommonComponent + embedding_rng.normal();
    }
    Embedding e = make_embedding(word_name(w, spec.n_words), std::move(vec));
    store.insert(e.word, e.vec);
    words.push_back(std::move(e));
  }

  Eigen::MatrixXd hidden(spec.dim, spec.dim);
  double row_scale = spec.hidden_factor_scale;
  for (int r = 0; r < spec.dim; ++r) {
    for (int c = 0; c < spec.dim; ++c) {
      hidden(r, c) = row_scale * factor_rng.normal();
    }
    row_scale *= kRowDecay;
  }
  MetricFactor hidden_factor(std::move(hidden));

  SimilarityDataset dataset;
  dataset.name = "synthetic";
  dataset.pairs.reserve(
      static_cast<size_t>(spec.n_words) * (spec.n_words - 1) / 2);
  for (int i = 0; i < spec.n_words; ++i) {
    for (int j = i + 1; j < spec.n_words; ++j) {
      const double s = metric_cosine(words[static_cast<size_t>(i)],
                                     words[static_cast<size_t>(j)],
                                     hidden_factor);
      double target = 0.5 * (s + 1.0);
      if (spec.noise_sigma > 0.0) {
        target += spec.noise_sigma * noise_rng.normal();
      }
      target = std::clamp(target, 0.0, 1.0);
      dataset.pairs.push_back({words[static_cast<size_t>(i)].word,
                               words[static_cast<size_t>(j)].word, target,
                               ""});
    }
  }
  return SyntheticData{std::move(store), std::move(dataset),
                       std::move(hidden_factor)};
}

SyntheticFiles write_synthetic(const SyntheticSpec& spec,
                               const std::filesystem::path& out_dir) {
  const SyntheticData data = generate_synthetic(spec);
  std::filesystem::create_directories(out_dir);

  SyntheticFiles files;
  files.embeddings = out_dir / "synthetic_embeddings.txt";
  files.judgments = out_dir / "synthetic_pairs.csv";
  files.hidden_factor = out_dir / "synthetic_hidden_factor.txt";

  write_embeddings_text(files.embeddings, data.store);

  std::ofstream out(files.judgments);
  if (!out) {
    fail(ErrorCode::io,
         "cannot write judgment file " + files.judgments.string());
  }
  out << "word1,word2,rating\n";
  char buf[64];
  for (const auto& pair : data.dataset.pairs) {
    std::snprintf(buf, sizeof(buf), "%.17g", pair.target);
    out << pair.word_a << ',' << pair.word_b << ',' << buf << '\n';
  }
  if (!out) {
    fail(ErrorCode::io,
         "failed writing judgment file " + files.judgments.string());
  }

  save_matrix_text(files.hidden_factor, data.hidden_factor.entries());
  return files;
}

}  // namespace metricsim
