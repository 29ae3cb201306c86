#include "metricsim/metric.hpp"

#include <cmath>

namespace metricsim {

namespace {

void check_same_dim(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorCode::dimension_mismatch,
         "embedding dimensions disagree: '" + a.word + "' has " +
             std::to_string(a.dim()) + ", '" + b.word + "' has " +
             std::to_string(b.dim()));
  }
}

void check_factor_dim(const Embedding& a, const MetricFactor& B) {
  if (a.dim() != B.dim()) {
    fail(ErrorCode::dimension_mismatch,
         "factor is " + std::to_string(B.dim()) + "x" +
             std::to_string(B.dim()) + " but '" + a.word + "' has dimension " +
             std::to_string(a.dim()));
  }
}

}  // namespace

Embedding make_embedding(std::string word, Eigen::VectorXd vec) {
  if (vec.size() == 0) {
    fail(ErrorCode::degenerate_input, "empty vector for word '" + word + "'");
  }
  if (!vec.allFinite()) {
    fail(ErrorCode::degenerate_input,
         "non-finite component in vector for word '" + word + "'");
  }
  if (vec.norm() == 0.0) {
    fail(ErrorCode::degenerate_input,
         "zero-norm vector for word '" + word + "'");
  }
  return Embedding{std::move(word), std::move(vec)};
}

MetricFactor::MetricFactor(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    fail(ErrorCode::dimension_mismatch,
         "metric factor must be square and non-empty, got " +
             std::to_string(entries_.rows()) + "x" +
             std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    fail(ErrorCode::degenerate_input, "non-finite entry in metric factor");
  }
}

MetricFactor MetricFactor::identity(int dim) {
  return MetricFactor(Eigen::MatrixXd::Identity(dim, dim));
}

double euclidean_inner(const Embedding& a, const Embedding& b) {
  check_same_dim(a, b);
  return a.vec.dot(b.vec);
}

double norm(const Embedding& a) { return a.vec.norm(); }

double cosine(const Embedding& a, const Embedding& b) {
  check_same_dim(a, b);
  const double na = a.vec.norm();
  const double nb = b.vec.norm();
  if (na == 0.0) {
    fail(ErrorCode::degenerate_input,
         "zero-norm vector for word '" + a.word + "'");
  }
  if (nb == 0.0) {
    fail(ErrorCode::degenerate_input,
         "zero-norm vector for word '" + b.word + "'");
  }
  return a.vec.dot(b.vec) / (na * nb);
}

double metric_inner(const Embedding& a, const Embedding& b,
                    const MetricFactor& B) {
  check_same_dim(a, b);
  check_factor_dim(a, B);
  const Eigen::VectorXd u = B.entries() * a.vec;
  const Eigen::VectorXd v = B.entries() * b.vec;
  return u.dot(v);
}

double metric_cosine(const Embedding& a, const Embedding& b,
                     const MetricFactor& B) {
  check_same_dim(a, b);
  check_factor_dim(a, B);
  const Eigen::VectorXd u = B.entries() * a.vec;
  const Eigen::VectorXd v = B.entries() * b.vec;
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0) {
    fail(ErrorCode::degenerate_projection,
         "factor projects word '" + a.word + "' to zero");
  }
  if (nv == 0.0) {
    fail(ErrorCode::degenerate_projection,
         "factor projects word '" + b.word + "' to zero");
  }
  return u.dot(v) / (nu * nv);
}

GradientBuffer metric_cosine_backward(const Embedding& a, const Embedding& b,
                                      const MetricFactor& B, double upstream) {
  check_same_dim(a, b);
  check_factor_dim(a, B);
  const Eigen::VectorXd u = B.entries() * a.vec;
  const Eigen::VectorXd v = B.entries() * b.vec;
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0) {
    fail(ErrorCode::degenerate_projection,
         "factor projects word '" + a.word + "' to zero");
  }
  if (nv == 0.0) {
    fail(ErrorCode::degenerate_projection,
         "factor projects word '" + b.word + "' to zero");
  }
  const double inv_nunv = 1.0 / (nu * nv);
  const double s = u.dot(v) * inv_nunv;
  const Eigen::VectorXd du = v * inv_nunv - u * (s / (nu * nu));
  const Eigen::VectorXd dv = u * inv_nunv - v * (s / (nv * nv));
  Eigen::MatrixXd grad = upstream * (du * a.vec.transpose());
  grad.noalias() += upstream * (dv * b.vec.transpose());
  return GradientBuffer(std::move(grad));
}

Eigen::MatrixXd gram(const MetricFactor& B) {
  // Compute one triangle and mirror it so the result is exactly symmetric.
  const int d = B.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  g.selfadjointView<Eigen::Lower>().rankUpdate(B.entries().transpose());
  return g.selfadjointView<Eigen::Lower>();
}

}  // namespace metricsim
