#include "pathexp/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathexp/errors.hpp"

namespace pathexp {

void validate(const WindowConfig& cfg) {
  if (cfg.open_run < 1 || cfg.close_run < 1) {
    throw BadConfigError("open_run and close_run must be >= 1");
  }
  if (!(2 <= cfg.w_min && cfg.w_min <= cfg.w_max)) {
    throw BadConfigError("need 2 <= w_min <= w_max");
  }
  if (cfg.min_growth < 0.0) throw BadConfigError("min_growth must be >= 0");
  if (cfg.min_gap < 0) throw BadConfigError("min_gap must be >= 0");
  if (cfg.max_windows < 1) throw BadConfigError("max_windows must be >= 1");
}

namespace {

// Absolute growth over the window. The denominator is taken in magnitude so
// that windows sitting in a negative-valued stretch of a normalised series
// (possible for simulated I(2) and unit-root paths) are measured rather than
// silently discarded; for positive series this is the plain relative growth.
EpisodeWindow make_window(const NormalizedSeries& s, int t0, int t1) {
  EpisodeWindow w;
  w.t0 = t0;
  w.t1 = t1;
  w.start_period = s.periods[static_cast<std::size_t>(t0)];
  w.end_period = s.periods[static_cast<std::size_t>(t1)];
  const double y0 = s.values[static_cast<std::size_t>(t0)];
  const double y1 = s.values[static_cast<std::size_t>(t1)];
  w.growth = std::abs(y1 - y0) / y0;
  return w;
}

}  // namespace

std::vector<EpisodeWindow> detect_windows(const NormalizedSeries& s,
                                          const WindowConfig& cfg, int lo,
                                          int hi) {
  validate(cfg);
  const int n_total = static_cast<int>(s.size());
  lo = std::max(lo, 0);
  hi = std::min(hi, n_total - 1);
  const int n = hi - lo + 1;
  if (n < cfg.open_run + 2) {
    throw TooShortError("detect_windows needs at least open_run + 2 = " +
                        std::to_string(cfg.open_run + 2) + " observations");
  }

  // d[k] is the second difference at range-local index k + 2. A window that
  // opens with its run starting at d[k] begins at level index k, so the two
  // levels feeding the first positive curvature are inside the window.
  const int nd = n - 2;
  auto d = [&](int k) {
    const std::size_t t = static_cast<std::size_t>(lo + k + 2);
    return s.values[t] - 2.0 * s.values[t - 1] + s.values[t - 2];
  };

  std::vector<EpisodeWindow> candidates;
  int k = 0;
  int pos_run = 0;
  while (k < nd) {
    if (d(k) > 0.0) {
      ++pos_run;
    } else {
      pos_run = 0;  // zeros and negatives both break an opening run
    }
    if (pos_run < cfg.open_run) {
      ++k;
      continue;
    }

    // Window opens; run started at d index k - open_run + 1.
    const int t0 = k - cfg.open_run + 1;
    int end = k + 2;  // last level consumed by the opening run
    int t1;
    int neg_run = 0;
    int j = k + 1;
    for (;;) {
      if (end - t0 + 1 >= cfg.w_max) {
        t1 = t0 + cfg.w_max - 1;
        break;
      }
      if (j >= nd) {
        t1 = n - 1;
        break;
      }
      if (d(j) < 0.0) {
        ++neg_run;
        if (neg_run == cfg.close_run) {
          const int first_neg = j - cfg.close_run + 1;
          t1 = first_neg + 1;  // level index preceding the first negative
          break;
        }
      } else {
        neg_run = 0;
      }
      end = j + 2;
      ++j;
    }

    candidates.push_back(make_window(s, lo + t0, lo + t1));
    // Resume so the next window cannot overlap this one: the next t0 equals
    // the d index where its opening run starts.
    k = t1 + 1;
    pos_run = 0;
  }

  // Width and growth filters.
  std::vector<EpisodeWindow> survivors;
  for (const EpisodeWindow& w : candidates) {
    if (w.width() < cfg.w_min) continue;
    if (!(w.growth >= cfg.min_growth)) continue;
    survivors.push_back(w);
  }

  // Greedy gap enforcement in temporal order.
  std::vector<EpisodeWindow> gapped;
  for (const EpisodeWindow& w : survivors) {
    if (!gapped.empty()) {
      const int gap = w.t0 - gapped.back().t1 - 1;
      if (gap < cfg.min_gap) continue;
    }
    gapped.push_back(w);
  }

  // Retain the max_windows largest-growth windows, reported in temporal
  // order. Growths within a 5% relative band count as tied and resolve to
  // the earliest start: w_max-truncated segments of one long explosive
  // stretch have growths equal up to noise, and the retained set must not
  // depend on which segment drew the luckier innovations.
  if (static_cast<int>(gapped.size()) > cfg.max_windows) {
    constexpr double kGrowthTieTol = 0.05;
    std::vector<std::size_t> remaining(gapped.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::vector<std::size_t> kept_idx;
    while (static_cast<int>(kept_idx.size()) < cfg.max_windows &&
           !remaining.empty()) {
      double gmax = 0.0;
      for (std::size_t i : remaining) gmax = std::max(gmax, gapped[i].growth);
      const double cutoff = gmax - kGrowthTieTol * gmax;
      std::size_t pick = remaining.size();
      for (std::size_t r = 0; r < remaining.size(); ++r) {
        if (gapped[remaining[r]].growth >= cutoff) {
          pick = r;
          break;  // remaining is in temporal order: earliest qualifying wins
        }
      }
      kept_idx.push_back(remaining[pick]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(kept_idx.begin(), kept_idx.end());
    std::vector<EpisodeWindow> kept;
    kept.reserve(kept_idx.size());
    for (std::size_t i : kept_idx) kept.push_back(gapped[i]);
    return kept;
  }
  return gapped;
}

std::vector<EpisodeWindow> detect_windows(const NormalizedSeries& s,
                                          const WindowConfig& cfg) {
  return detect_windows(s, cfg, 0, static_cast<int>(s.size()) - 1);
}

std::optional<double> pre_window_baseline(const NormalizedSeries& s,
                                          const EpisodeWindow& w,
                                          int lookback) {
  // Growth rates g_t for t strictly before t0; g_t needs levels t-1 and t.
  const int first = std::max(1, w.t0 - lookback);
  const int last = w.t0 - 1;
  if (last - first + 1 < 2) return std::nullopt;
  double sum = 0.0;
  int count = 0;
  for (int t = first; t <= last; ++t) {
    const double prev = s.values[static_cast<std::size_t>(t - 1)];
    const double cur = s.values[static_cast<std::size_t>(t)];
    sum += (cur - prev) / prev;
    ++count;
  }
  return sum / static_cast<double>(count);
}

}  // namespace pathexp
