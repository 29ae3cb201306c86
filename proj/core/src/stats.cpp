#include "metricsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "metricsim/error.hpp"

namespace metricsim {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y,
                   size_t min_n) {
  if (x.size() != y.size()) {
    fail(ErrorCode::precondition,
         "correlation inputs differ in length: " + std::to_string(x.size()) +
             " vs " + std::to_string(y.size()));
  }
  if (x.size() < min_n) {
    fail(ErrorCode::precondition,
         "correlation needs at least " + std::to_string(min_n) +
             " samples, got " + std::to_string(x.size()));
  }
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y, 2);
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fail(ErrorCode::undefined_correlation,
         sxx == 0.0 ? "first input has zero variance"
                    : "second input has zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    const double mean_rank = 0.5 * (static_cast<double>(i + 1) +
                                    static_cast<double>(j + 1));
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y, 2);
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

namespace detail {

namespace {
// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}
}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  const double x = dof / (dof + t * t);
  return regularized_incomplete_beta(0.5 * dof, 0.5, x);
}

}  // namespace detail

double significance(double r, long n) {
  if (n < 3) {
    fail(ErrorCode::precondition,
         "significance needs n >= 3, got " + std::to_string(n));
  }
  if (std::isnan(r)) {
    fail(ErrorCode::precondition, "correlation is NaN");
  }
  if (std::fabs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  return detail::student_t_two_sided(t, dof);
}

double permutation_significance(std::span<const double> x,
                                std::span<const double> y, CorrKind kind) {
  check_lengths(x, y, 3);
  const size_t n = x.size();
  if (n > 12) {
    fail(ErrorCode::precondition,
         "exact permutation test is capped at n <= 12, got " +
             std::to_string(n));
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  if (kind == CorrKind::spearman) {
    xs = fractional_ranks(xs);
    ys = fractional_ranks(ys);
  }
  const double observed = std::fabs(pearson(xs, ys));

  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::vector<double> yp(n);
  uint64_t total = 0, at_least = 0;
  do {
    for (size_t i = 0; i < n; ++i) yp[i] = ys[perm[i]];
    const double r = std::fabs(pearson(xs, yp));
    ++total;
    if (r >= observed - 1e-12) ++at_least;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace metricsim
