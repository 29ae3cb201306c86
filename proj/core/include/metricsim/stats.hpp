#pragma once

#include <span>
#include <vector>

namespace metricsim {

enum class CorrKind { pearson, spearman };

// Product-moment correlation. Requires equal lengths, n >= 2 and nonzero
// variance in both inputs; zero variance raises undefined_correlation.
double pearson(std::span<const double> x, std::span<const double> y);

// Fractional (average) ranks, 1-based; ties receive the mean of the ranks
// they span.
std::vector<double> fractional_ranks(std::span<const double> v);

// Pearson correlation of the fractional ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided p-value for a correlation coefficient under the t approximation
// t = r sqrt((n-2)/(1-r^2)) with n-2 degrees of freedom. The same
// approximation is applied to Pearson and Spearman coefficients. |r| >= 1
// returns 0 (exact by convention). Requires n >= 3.
double significance(double r, long n);

// Exact two-sided permutation p-value: the fraction of all n! orderings of y
// whose |correlation| with x reaches the observed one. Factorial cost; capped
// at n <= 12.
double permutation_significance(std::span<const double> x,
                                std::span<const double> y, CorrKind kind);

namespace detail {
// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided(double t, double dof);
}  // namespace detail

}  // namespace metricsim
