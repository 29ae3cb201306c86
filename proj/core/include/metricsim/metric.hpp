#pragma once

#include <Eigen/Core>
#include <string>

#include "metricsim/error.hpp"

namespace metricsim {

// A word and its dense vector representation.
struct Embedding {
  std::string word;
  Eigen::VectorXd vec;

  int dim() const { return static_cast<int>(vec.size()); }
};

// Validating constructor used at ingestion: dimension > 0, finite entries,
// strictly positive Euclidean norm.
Embedding make_embedding(std::string word, Eigen::VectorXd vec);

// Square trainable factor B of the metric d = B^T B. The metric itself is
// never stored unfactored; positive semi-definiteness is structural.
class MetricFactor {
 public:
  explicit MetricFactor(Eigen::MatrixXd entries);
  static MetricFactor identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::MatrixXd& entries() { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// dL/dB accumulator, same shape as the factor it differentiates.
struct GradientBuffer {
  Eigen::MatrixXd entries;

  explicit GradientBuffer(int dim) : entries(Eigen::MatrixXd::Zero(dim, dim)) {}
  explicit GradientBuffer(Eigen::MatrixXd m) : entries(std::move(m)) {}

  int dim() const { return static_cast<int>(entries.rows()); }
};

// Euclidean inner product sum_i a_i b_i.
double euclidean_inner(const Embedding& a, const Embedding& b);

// sqrt(a . a). Total on any finite vector, including the zero vector.
double norm(const Embedding& a);

// Standard cosine similarity (a . b) / (|a| |b|).
double cosine(const Embedding& a, const Embedding& b);

// Metric inner product (Ba)^T (Bb) = sum_ij a_i (B^T B)_ij b_j.
double metric_inner(const Embedding& a, const Embedding& b,
                    const MetricFactor& B);

// Cosine of the B-transformed vectors; reduces to cosine() when B = I.
double metric_cosine(const Embedding& a, const Embedding& b,
                     const MetricFactor& B);

// Analytic gradient of metric_cosine with respect to B, scaled by upstream.
// With u = Ba, v = Bb, s = metric_cosine:
//   ds/du = v/(|u||v|) - s u/|u|^2,   ds/dv symmetric,
//   ds/dB = (ds/du) a^T + (ds/dv) b^T.
GradientBuffer metric_cosine_backward(const Embedding& a, const Embedding& b,
                                      const MetricFactor& B, double upstream);

// B^T B, symmetric by construction. Export/inspection only, the training
// path never materializes it.
Eigen::MatrixXd gram(const MetricFactor& B);

}  // namespace metricsim
