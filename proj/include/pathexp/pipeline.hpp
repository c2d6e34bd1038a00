#pragma once

#include <optional>
#include <vector>

#include "pathexp/classify.hpp"
#include "pathexp/diagnostics.hpp"
#include "pathexp/window.hpp"

namespace pathexp {

// One fully analysed episode: window, diagnostics, gate and verdict.
struct EpisodeAnalysis {
  EpisodeWindow window;
  std::optional<double> baseline;
  DiagnosticSet diag;
  GateResult gate;
  EpisodeVerdict verdict;
};

struct PipelineConfig {
  WindowConfig window;
  GateConfig gate;
  int baseline_lookback = 5;
};

// Detect, diagnose, gate and score every window of a normalised series.
// detect_lo/detect_hi restrict detection to an index range (scenario masks);
// -1 means unrestricted.
std::vector<EpisodeAnalysis> analyze_series(const NormalizedSeries& s,
                                            const PipelineConfig& cfg,
                                            const ThresholdVector& thresholds,
                                            int detect_lo = -1,
                                            int detect_hi = -1);

std::vector<EpisodeAnalysis> analyze_series(const RawSeries& s,
                                            const PipelineConfig& cfg,
                                            const ThresholdVector& thresholds);

}  // namespace pathexp
