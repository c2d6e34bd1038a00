#pragma once

#include <optional>
#include <vector>

#include "pathexp/series.hpp"

namespace pathexp {

struct WindowConfig {
  int open_run = 4;       // consecutive positive second differences to open
  int close_run = 2;      // consecutive negative second differences to close
  int w_min = 5;          // minimum retained width (observations)
  int w_max = 15;         // maximum window width (observations)
  double min_growth = 0.10;
  int min_gap = 5;        // periods strictly between retained windows
  int max_windows = 2;
};

void validate(const WindowConfig& cfg);

// A dated candidate episode [t0, t1], indices into the series.
struct EpisodeWindow {
  int t0 = 0;
  int t1 = 0;
  int start_period = 0;
  int end_period = 0;
  double growth = 0.0;  // |y[t1] - y[t0]| / y[t0]

  int width() const { return t1 - t0 + 1; }
};

// Endogenous window detection on the second differences of the normalised
// series. A run of open_run strictly positive second differences opens a
// window at the first level observation feeding the run; the window extends
// until close_run strictly negative second differences occur (t1 is the
// index preceding the first of them), the width cap w_max is hit, or the
// series ends. Exact zeros reset both run counters. Windows below w_min or
// min_growth are discarded, survivors are filtered greedily in temporal
// order to enforce min_gap, and at most max_windows are retained (largest
// growth first; growths within a small relative band count as tied and
// resolve to the earliest start), reported in temporal order.
std::vector<EpisodeWindow> detect_windows(const NormalizedSeries& s,
                                          const WindowConfig& cfg);

// Same detector restricted to series indices [lo, hi]; windows are reported
// in full-series coordinates. Used by scenario masks.
std::vector<EpisodeWindow> detect_windows(const NormalizedSeries& s,
                                          const WindowConfig& cfg, int lo,
                                          int hi);

// Mean growth rate over up to `lookback` periods strictly before the window.
// nullopt when fewer than two pre-window growth rates exist.
std::optional<double> pre_window_baseline(const NormalizedSeries& s,
                                          const EpisodeWindow& w,
                                          int lookback = 5);

}  // namespace pathexp
