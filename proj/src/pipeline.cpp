#include "pathexp/pipeline.hpp"

#include <string>

#include "pathexp/errors.hpp"

namespace pathexp {

std::vector<EpisodeAnalysis> analyze_series(const NormalizedSeries& s,
                                            const PipelineConfig& cfg,
                                            const ThresholdVector& thresholds,
                                            int detect_lo, int detect_hi) {
  const int n = static_cast<int>(s.size());
  const int lo = detect_lo < 0 ? 0 : detect_lo;
  const int hi = detect_hi < 0 ? n - 1 : detect_hi;
  const std::vector<EpisodeWindow> windows =
      detect_windows(s, cfg.window, lo, hi);

  std::vector<EpisodeAnalysis> out;
  out.reserve(windows.size());
  for (const EpisodeWindow& w : windows) {
    try {
      EpisodeAnalysis ea;
      ea.window = w;
      ea.baseline = pre_window_baseline(s, w, cfg.baseline_lookback);
      ea.diag = compute_diagnostics(s, w, ea.baseline);
      ea.gate = apply_gate(ea.diag, cfg.gate);
      ea.verdict = score_episode(ea.diag, thresholds, ea.gate);
      if (thresholds.meta.T != n) {
        ea.verdict.notes.push_back(
            "thresholds calibrated at T=" + std::to_string(thresholds.meta.T) +
            ", series length " + std::to_string(n));
      }
      out.push_back(std::move(ea));
    } catch (const Error& e) {
      throw Error("series '" + s.label + "', window " +
                  std::to_string(w.start_period) + "-" +
                  std::to_string(w.end_period) + ": " + e.what());
    }
  }
  return out;
}

std::vector<EpisodeAnalysis> analyze_series(const RawSeries& s,
                                            const PipelineConfig& cfg,
                                            const ThresholdVector& thresholds) {
  return analyze_series(normalize(s), cfg, thresholds);
}

}  // namespace pathexp
