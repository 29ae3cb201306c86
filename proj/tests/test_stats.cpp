#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "metricsim/error.hpp"
#include "metricsim/rng.hpp"
#include "metricsim/stats.hpp"
#include "oracles.hpp"

using namespace metricsim;

namespace {

double pearson_oracle(const std::vector<double>& a,
                      const std::vector<double>& b) {
  return oracles::pearson(a, b);
}

double spearman_oracle(const std::vector<double>& a,
                       const std::vector<double>& b) {
  return oracles::spearman(a, b);
}

double p_oracle(double r, long n) { return oracles::correlation_pvalue(r, n); }

}  // namespace

TEST_CASE("pearson fixed examples") {
  std::vector<double> x{1, 2, 3}, y{2, 4, 6};
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  y = {6, 4, 2};
  CHECK(pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
  std::vector<double> x4{1, 2, 3, 4}, y4{1, 3, 2, 4};
  CHECK(pearson(x4, y4) == 0.8);  // exact in IEEE doubles
}

TEST_CASE("pearson errors") {
  std::vector<double> x{1, 2, 3}, flat{5, 5, 5};
  CHECK_THROWS_AS(pearson(x, flat), Error);
  CHECK_THROWS_AS(pearson(flat, x), Error);
  std::vector<double> one{1};
  CHECK_THROWS_AS(pearson(one, one), Error);
  std::vector<double> two{1, 2};
  CHECK_THROWS_AS(pearson(x, two), Error);
}

TEST_CASE("fractional ranks with ties") {
  std::vector<double> x{1, 2, 2, 3};
  const auto r = fractional_ranks(x);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 2.5);
  CHECK(r[2] == 2.5);
  CHECK(r[3] == 4.0);
}

TEST_CASE("spearman fixed examples") {
  std::vector<double> x{1, 2, 3}, y{9, 4, 1};
  CHECK(spearman(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
  // strictly monotone transform of x
  std::vector<double> fx{std::exp(1.0), std::exp(2.0), std::exp(3.0)};
  CHECK(spearman(x, fx) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> xt{1, 2, 2, 3}, yt{1, 2, 3, 4};
  CHECK(spearman(xt, yt) ==
        doctest::Approx(spearman_oracle(xt, yt)).epsilon(1e-12));
}

TEST_CASE("correlations agree with brute-force oracles") {
  Rng rng(101);
  int tied_instances = 0;
  const int total = 1000;
  for (int rep = 0; rep < total; ++rep) {
    const int n = 3 + static_cast<int>(rng.bounded(40));
    const bool force_ties = rep % 3 != 0;  // > 30% tied instances
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      if (force_ties) {
        x[i] = static_cast<double>(rng.bounded(6));
        y[i] = static_cast<double>(rng.bounded(6));
      } else {
        x[i] = rng.normal();
        y[i] = rng.normal();
      }
    }
    bool tied = false;
    for (int i = 0; i < n && !tied; ++i) {
      for (int j = i + 1; j < n && !tied; ++j) {
        tied = x[i] == x[j] || y[i] == y[j];
      }
    }
    if (tied) ++tied_instances;
    try {
      const double lib_r = pearson(x, y);
      CHECK(std::fabs(lib_r - pearson_oracle(x, y)) < 1e-12);
      CHECK(std::fabs(spearman(x, y) - spearman_oracle(x, y)) < 1e-12);
    } catch (const Error& e) {
      // zero-variance draw; oracle would divide by zero too
      CHECK(e.code() == ErrorCode::undefined_correlation);
    }
  }
  CHECK(tied_instances > total * 3 / 10);
}

TEST_CASE("permutation invariance of both correlations") {
  Rng rng(102);
  const int n = 25;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  const double r0 = pearson(x, y);
  const double rho0 = spearman(x, y);
  // one fixed permutation applied to both
  std::vector<double> xp(n), yp(n);
  for (int i = 0; i < n; ++i) {
    xp[i] = x[(i * 7 + 3) % n];
    yp[i] = y[(i * 7 + 3) % n];
  }
  CHECK(pearson(xp, yp) == doctest::Approx(r0).epsilon(1e-12));
  CHECK(spearman(xp, yp) == doctest::Approx(rho0).epsilon(1e-12));
}

TEST_CASE("pearson affine invariance, spearman rank invariance") {
  Rng rng(103);
  const int n = 30;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  const double r0 = pearson(x, y);
  std::vector<double> ax(n), cube(n);
  for (int i = 0; i < n; ++i) {
    ax[i] = 2.5 * x[i] + 7.0;
    cube[i] = x[i] * x[i] * x[i];  // strictly increasing
  }
  CHECK(pearson(ax, y) == doctest::Approx(r0).epsilon(1e-12));
  std::vector<double> neg(n);
  for (int i = 0; i < n; ++i) neg[i] = -1.5 * x[i];
  CHECK(pearson(neg, y) == doctest::Approx(-r0).epsilon(1e-12));
  CHECK(spearman(cube, y) == doctest::Approx(spearman(x, y)).epsilon(1e-12));
}

TEST_CASE("significance fixed points") {
  CHECK(significance(0.0, 30) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(significance(1.0, 10) == 0.0);
  CHECK(significance(-1.0, 10) == 0.0);
  // r=0.5, n=30: known approximately 0.0049
  CHECK(significance(0.5, 30) == doctest::Approx(0.0049).epsilon(0.02));
  // monotonicity in |r|
  CHECK(significance(0.9, 25) < significance(0.1, 25));
  CHECK_THROWS_AS(significance(0.5, 2), Error);
}

TEST_CASE("significance agrees with a quadrature oracle") {
  for (const double r : {0.1, 0.3, 0.5, 0.7, 0.9, -0.4, -0.8}) {
    for (const long n : {5L, 12L, 30L, 100L}) {
      CHECK(significance(r, n) ==
            doctest::Approx(p_oracle(r, n)).epsilon(1e-6));
    }
  }
}

TEST_CASE("exact permutation p-value") {
  // x and y perfectly correlated, n=4: only the identity ordering of ranks
  // reaches |r| = 1 on each side, so p = 2/4! = 1/12.
  std::vector<double> x{1, 2, 3, 4}, y{10, 20, 30, 40};
  CHECK(permutation_significance(x, y, CorrKind::pearson) ==
        doctest::Approx(2.0 / 24.0).epsilon(1e-12));
  CHECK(permutation_significance(x, y, CorrKind::spearman) ==
        doctest::Approx(2.0 / 24.0).epsilon(1e-12));

  // must agree with the t approximation on the 0.05 verdict for a strong
  // correlation at moderate n
  Rng rng(104);
  std::vector<double> a(7), b(7);
  for (int i = 0; i < 7; ++i) {
    a[i] = rng.normal();
    b[i] = 0.8 * a[i] + 0.4 * rng.normal();
  }
  const double p_exact = permutation_significance(a, b, CorrKind::pearson);
  const double p_t = significance(pearson(a, b), 7);
  CHECK(p_exact > 0.0);
  CHECK(p_exact < 0.05);
  CHECK(p_t < 0.05);

  std::vector<double> big(13, 0.0);
  CHECK_THROWS_AS(permutation_significance(big, big, CorrKind::pearson),
                  Error);
}
