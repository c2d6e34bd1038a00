#include "pathexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "pathexp/errors.hpp"

namespace pathexp {

double mean(std::span<const double> v) {
  if (v.empty()) throw EmptyInputError("mean of empty vector");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) {
    throw TooShortError("sample_sd needs at least 2 observations");
  }
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) {
    const double d = x - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::span<const double> v, double p) {
  if (v.empty()) throw EmptyInputError("quantile of empty vector");
  if (p < 0.0 || p > 1.0) {
    throw BadConfigError("quantile probability must lie in [0, 1]");
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> winsorize(std::span<const double> v, double lo_pct,
                              double hi_pct) {
  if (v.empty()) throw EmptyInputError("winsorize of empty vector");
  if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 1.0)) {
    throw BadConfigError("winsorize needs 0 <= lo_pct < hi_pct <= 1");
  }
  const double lo = quantile(v, lo_pct);
  const double hi = quantile(v, hi_pct);
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x = std::clamp(x, lo, hi);
  return out;
}

LinearFit ols_linear_xy(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw BadConfigError("ols_linear_xy: mismatched lengths");
  }
  const std::size_t n = y.size();
  if (n < 3) {
    throw TooShortError("ols_linear needs at least 3 observations, got " +
                        std::to_string(n));
  }
  const double xbar = mean(x);
  const double ybar = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - xbar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  if (sxx == 0.0) {
    throw BadConfigError("ols_linear_xy: degenerate regressor");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
  }
  fit.residual_sd = sample_sd(fit.residuals);
  return fit;
}

LinearFit ols_linear(std::span<const double> y) {
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  return ols_linear_xy(x, y);
}

QuadraticFit ols_quadratic(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 4) {
    throw TooShortError("ols_quadratic needs at least 4 observations, got " +
                        std::to_string(n));
  }
  // Normal equations for the design (1, tau, tau^2), solved by Gaussian
  // elimination with partial pivoting on the 3x3 system.
  double s[5] = {static_cast<double>(n), 0, 0, 0, 0};  // sums of tau^k
  double b[3] = {0, 0, 0};                             // sums of tau^k * y
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const double t2 = t * t;
    s[1] += t;
    s[2] += t2;
    s[3] += t2 * t;
    s[4] += t2 * t2;
    b[0] += y[i];
    b[1] += t * y[i];
    b[2] += t2 * y[i];
  }
  double a[3][4] = {{s[0], s[1], s[2], b[0]},
                    {s[1], s[2], s[3], b[1]},
                    {s[2], s[3], s[4], b[2]}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    if (a[col][col] == 0.0) {
      throw BadConfigError("ols_quadratic: singular normal equations");
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  QuadraticFit fit;
  fit.a0 = a[0][3] / a[0][0];
  fit.a1 = a[1][3] / a[1][1];
  fit.a2 = a[2][3] / a[2][2];
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    fit.residuals[i] = y[i] - (fit.a0 + fit.a1 * t + fit.a2 * t * t);
  }
  return fit;
}

namespace {

// Fractional ranks, ties get the average rank.
std::vector<double> fractional_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

bool all_tied(std::span<const double> v) {
  for (double x : v) {
    if (x != v[0]) return false;
  }
  return true;
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw BadConfigError("rank correlation: mismatched lengths");
  }
  if (a.size() < 2) {
    throw TooShortError("rank correlation needs at least 2 observations");
  }
}

}  // namespace

std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b) {
  check_pair(a, b);
  if (all_tied(a) || all_tied(b)) return std::nullopt;
  const std::vector<double> ra = fractional_ranks(a);
  const std::vector<double> rb = fractional_ranks(b);
  const double ma = mean(ra), mb = mean(rb);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

std::optional<double> kendall(std::span<const double> a,
                              std::span<const double> b) {
  check_pair(a, b);
  if (all_tied(a) || all_tied(b)) return std::nullopt;
  const std::size_t n = a.size();
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 || db == 0.0) continue;  // ties enter via the denominator
      if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double tied_pairs_a = 0.0, tied_pairs_b = 0.0;
  {
    // Recover per-vector tied-pair counts for the tau-b denominator.
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    auto tied_pairs = [](const std::vector<double>& v) {
      double total = 0.0;
      std::size_t i = 0;
      while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        total += 0.5 * t * (t - 1.0);
        i = j + 1;
      }
      return total;
    };
    tied_pairs_a = tied_pairs(sa);
    tied_pairs_b = tied_pairs(sb);
  }
  const double denom =
      std::sqrt((n0 - tied_pairs_a) * (n0 - tied_pairs_b));
  if (denom == 0.0) return std::nullopt;
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) /
         denom;
}

}  // namespace pathexp
