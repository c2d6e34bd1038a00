#pragma once

#include <array>
#include <optional>
#include <string>

#include "pathexp/series.hpp"
#include "pathexp/window.hpp"

namespace pathexp {

// Layer 1: level geometry.
struct Layer1 {
  double alpha2_norm = 0.0;           // quadratic coefficient / window mean
  double convexity_persistence = 0.0; // fraction of second differences > 0
  double mean_growth = 0.0;           // mean of g_t = dy_t / y_{t-1}
};

// Layer 2: growth rate dynamics.
struct Layer2 {
  std::optional<double> growth_trend_norm;  // slope(g) / |mean(g)|
  double growth_sign_persistence = 0.0;     // fraction of g with sign(mean(g))
  std::optional<double> growth_ratio;       // mean(g)/baseline, clamped +-10
};

// Layer 3: normalised curvature nc_t = d2 y_t / y_{t-2}, winsorised at the
// within-window 1st/99th percentiles.
struct Layer3 {
  double nc_mean = 0.0;
  double nc_positivity = 0.0;            // fraction > 0 after winsorisation
  std::optional<double> nc_trend_norm;   // slope(nc) / |mean(nc)|
};

// Layer 4: log-space behaviour. Zeroed out when the window contains a
// non-positive value (log_ok = false).
struct Layer4 {
  double log_linearity = 0.0;              // 1 - sd(resid)/(|slope| (t1-t0))
  double lgs = 0.0;                        // max(0, 1 - sd(l)/|mean(l)|)
  std::optional<double> log_growth_trend;  // slope(l) / |mean(l)|
};

struct Layer4Result {
  Layer4 stats;
  bool log_ok = false;
  std::optional<double> implied_rho;  // exp(mean log growth) when log_ok
};

// The twelve within-window path statistics, grouped by layer.
struct DiagnosticSet {
  Layer1 layer1;
  Layer2 layer2;
  Layer3 layer3;
  Layer4 layer4;
  bool log_ok = false;
  std::optional<double> implied_rho;

  // Statistics in canonical order (see kStatNames); absent entries are
  // undefined-markers and shrink the layer denominator when scoring.
  std::array<std::optional<double>, 12> as_array() const;
};

inline constexpr std::array<const char*, 12> kStatNames = {
    "alpha2_norm",       "convexity_persistence", "mean_growth",
    "growth_trend_norm", "growth_sign_persistence", "growth_ratio",
    "nc_mean",           "nc_positivity",         "nc_trend_norm",
    "log_linearity",     "lgs",                   "log_growth_trend",
};

// Layer of each canonical statistic, 0-based.
inline constexpr std::array<int, 12> kStatLayer = {0, 0, 0, 1, 1, 1,
                                                   2, 2, 2, 3, 3, 3};

Layer1 layer1_stats(const NormalizedSeries& s, const EpisodeWindow& w);
Layer2 layer2_stats(const NormalizedSeries& s, const EpisodeWindow& w,
                    std::optional<double> baseline);
Layer3 layer3_stats(const NormalizedSeries& s, const EpisodeWindow& w);
Layer4Result layer4_stats(const NormalizedSeries& s, const EpisodeWindow& w);

DiagnosticSet compute_diagnostics(const NormalizedSeries& s,
                                  const EpisodeWindow& w,
                                  std::optional<double> baseline);

}  // namespace pathexp
