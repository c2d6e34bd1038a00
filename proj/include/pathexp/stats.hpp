#pragma once

#include <optional>
#include <span>
#include <vector>

namespace pathexp {

double mean(std::span<const double> v);

// Sample standard deviation, n-1 denominator. Used everywhere an "sd"
// appears so small-window statistics follow one convention.
double sample_sd(std::span<const double> v);

// Linear-interpolation quantile between order statistics at position
// h = (n-1)p (the "type 7" rule). Input need not be sorted.
double quantile(std::span<const double> v, double p);

// Clamp values into [Q(lo_pct), Q(hi_pct)], bounds taken from the input.
// Order preserving; re-clamping with the same bounds changes nothing.
std::vector<double> winsorize(std::span<const double> v, double lo_pct = 0.01,
                              double hi_pct = 0.99);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> residuals;
  double residual_sd = 0.0;
};

struct QuadraticFit {
  double a0 = 0.0;  // coefficient on 1
  double a1 = 0.0;  // coefficient on tau
  double a2 = 0.0;  // coefficient on tau^2
  std::vector<double> residuals;
};

// Least squares of y on (1, tau) with tau = 0,1,2,... Needs length >= 3.
LinearFit ols_linear(std::span<const double> y);

// Same fit with explicit abscissae (used when observations were excluded
// and the clock has gaps).
LinearFit ols_linear_xy(std::span<const double> x, std::span<const double> y);

// Least squares of y on (1, tau, tau^2), tau = 0,1,2,... Needs length >= 4.
QuadraticFit ols_quadratic(std::span<const double> y);

// Spearman rank correlation: Pearson on fractional ranks, ties get the
// average rank. Returns nullopt when either vector is all ties (the
// correlation is undefined, which is distinct from zero concordance).
std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b);

// Kendall tau-b. Same degenerate convention as spearman.
std::optional<double> kendall(std::span<const double> a,
                              std::span<const double> b);

}  // namespace pathexp
