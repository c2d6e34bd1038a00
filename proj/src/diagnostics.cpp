#include "pathexp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pathexp/errors.hpp"
#include "pathexp/stats.hpp"

namespace pathexp {

namespace {

constexpr double kNcDenomGuard = 1e-8;
constexpr double kGrowthRatioCap = 10.0;

void check_width(const EpisodeWindow& w) {
  if (w.width() < 4) {
    throw TooShortError("diagnostics need window width >= 4, got " +
                        std::to_string(w.width()));
  }
}

std::vector<double> window_values(const NormalizedSeries& s,
                                  const EpisodeWindow& w) {
  return std::vector<double>(
      s.values.begin() + w.t0, s.values.begin() + w.t1 + 1);
}

// Period-on-period growth rates within the window: g_t = dy_t / y_{t-1},
// t = t0+1 .. t1.
std::vector<double> window_growth(const std::vector<double>& y) {
  std::vector<double> g(y.size() - 1);
  for (std::size_t i = 1; i < y.size(); ++i) {
    g[i - 1] = (y[i] - y[i - 1]) / y[i - 1];
  }
  return g;
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Least-squares slope for n >= 2 points (the fits in this module only need
// the slope once the level statistics are normalised away).
double slope_xy(const std::vector<double>& x, const std::vector<double>& y) {
  const double xbar = mean(x);
  const double ybar = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - xbar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  return sxy / sxx;
}

}  // namespace

Layer1 layer1_stats(const NormalizedSeries& s, const EpisodeWindow& w) {
  check_width(w);
  const std::vector<double> y = window_values(s, w);
  const double ybar = mean(y);
  if (ybar == 0.0) {
    throw ZeroDenominatorError("layer1: window mean is zero");
  }
  Layer1 out;
  out.alpha2_norm = ols_quadratic(y).a2 / ybar;

  const std::vector<double> d2 = second_diff(y);
  int positive = 0;
  for (double v : d2) {
    if (v > 0.0) ++positive;
  }
  out.convexity_persistence =
      static_cast<double>(positive) / static_cast<double>(d2.size());
  out.mean_growth = mean(window_growth(y));
  return out;
}

Layer2 layer2_stats(const NormalizedSeries& s, const EpisodeWindow& w,
                    std::optional<double> baseline) {
  check_width(w);
  const std::vector<double> y = window_values(s, w);
  const std::vector<double> g = window_growth(y);
  const double gbar = mean(g);

  Layer2 out;
  std::vector<double> clock(g.size());
  for (std::size_t i = 0; i < clock.size(); ++i) {
    clock[i] = static_cast<double>(i);
  }
  if (gbar != 0.0) {
    out.growth_trend_norm = slope_xy(clock, g) / std::abs(gbar);
  }

  const int target = sign_of(gbar);
  int matches = 0;
  for (double v : g) {
    if (sign_of(v) == target) ++matches;
  }
  out.growth_sign_persistence =
      static_cast<double>(matches) / static_cast<double>(g.size());

  if (baseline.has_value() && std::isfinite(*baseline) && *baseline != 0.0) {
    out.growth_ratio =
        std::clamp(gbar / *baseline, -kGrowthRatioCap, kGrowthRatioCap);
  }
  return out;
}

Layer3 layer3_stats(const NormalizedSeries& s, const EpisodeWindow& w) {
  check_width(w);
  // nc_t = d2 y_t / y_{t-2} for t = t0+2 .. t1; observations whose lagged
  // denominator is below the guard are excluded before winsorisation.
  std::vector<double> nc;
  std::vector<double> clock;
  for (int t = w.t0 + 2; t <= w.t1; ++t) {
    const double denom = s.values[static_cast<std::size_t>(t - 2)];
    if (std::abs(denom) < kNcDenomGuard) continue;
    const double d2 = s.values[static_cast<std::size_t>(t)] -
                      2.0 * s.values[static_cast<std::size_t>(t - 1)] +
                      s.values[static_cast<std::size_t>(t - 2)];
    nc.push_back(d2 / denom);
    clock.push_back(static_cast<double>(t - (w.t0 + 2)));
  }
  if (nc.empty()) {
    throw AllDegenerateError(
        "layer3: every normalised-curvature observation was excluded");
  }

  const std::vector<double> wz = winsorize(nc, 0.01, 0.99);
  Layer3 out;
  out.nc_mean = mean(wz);
  int positive = 0;
  for (double v : wz) {
    if (v > 0.0) ++positive;
  }
  out.nc_positivity =
      static_cast<double>(positive) / static_cast<double>(wz.size());
  if (out.nc_mean != 0.0 && wz.size() >= 2) {
    out.nc_trend_norm = slope_xy(clock, wz) / std::abs(out.nc_mean);
  }
  return out;
}

Layer4Result layer4_stats(const NormalizedSeries& s, const EpisodeWindow& w) {
  check_width(w);
  const std::vector<double> y = window_values(s, w);

  Layer4Result out;
  // Log-space behaviour is a property of the underlying level path, so the
  // domain check respects the sign of the origin: a series normalised by a
  // negative first value has positive entries exactly where the level is
  // negative. Fail-safe, not an error: paths that cross zero still flow
  // through the gate (and fail LGS there).
  bool log_ok = s.origin_value > 0.0;
  for (double v : y) {
    if (v <= 0.0) log_ok = false;
  }
  if (!log_ok) {
    out.stats.log_linearity = 0.0;
    out.stats.lgs = 0.0;
    out.stats.log_growth_trend = 0.0;
    out.log_ok = false;
    return out;
  }
  out.log_ok = true;

  std::vector<double> logs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) logs[i] = std::log(y[i]);

  const LinearFit fit = ols_linear(logs);
  const double denom = std::abs(fit.slope) * static_cast<double>(w.t1 - w.t0);
  out.stats.log_linearity = denom == 0.0 ? 0.0 : 1.0 - fit.residual_sd / denom;

  std::vector<double> l(logs.size() - 1);
  for (std::size_t i = 1; i < logs.size(); ++i) l[i - 1] = logs[i] - logs[i - 1];
  const double lbar = mean(l);
  if (lbar == 0.0) {
    out.stats.lgs = 0.0;
  } else {
    out.stats.lgs = std::max(0.0, 1.0 - sample_sd(l) / std::abs(lbar));
    std::vector<double> clock(l.size());
    for (std::size_t i = 0; i < clock.size(); ++i) {
      clock[i] = static_cast<double>(i);
    }
    out.stats.log_growth_trend = slope_xy(clock, l) / std::abs(lbar);
  }
  out.implied_rho = std::exp(lbar);
  return out;
}

DiagnosticSet compute_diagnostics(const NormalizedSeries& s,
                                  const EpisodeWindow& w,
                                  std::optional<double> baseline) {
  DiagnosticSet d;
  d.layer1 = layer1_stats(s, w);
  d.layer2 = layer2_stats(s, w, baseline);
  d.layer3 = layer3_stats(s, w);
  const Layer4Result l4 = layer4_stats(s, w);
  d.layer4 = l4.stats;
  d.log_ok = l4.log_ok;
  d.implied_rho = l4.implied_rho;
  return d;
}

std::array<std::optional<double>, 12> DiagnosticSet::as_array() const {
  return {
      layer1.alpha2_norm,
      layer1.convexity_persistence,
      layer1.mean_growth,
      layer2.growth_trend_norm,
      layer2.growth_sign_persistence,
      layer2.growth_ratio,
      layer3.nc_mean,
      layer3.nc_positivity,
      layer3.nc_trend_norm,
      layer4.log_linearity,
      layer4.lgs,
      layer4.log_growth_trend,
  };
}

}  // namespace pathexp
