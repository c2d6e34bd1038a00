#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pathexp/diagnostics.hpp"
#include "pathexp/simulate.hpp"

namespace pathexp {

// Stage A gate: three absolute thresholds an episode must clear before any
// intensity scoring. nc_min is (rho_min - 1)^2 with rho_min = 1.032.
struct GateConfig {
  double nc_min = 0.001024;
  double ncp_min = 0.60;
  double lgs_min = 0.70;
};

inline GateConfig strict_gate() { return GateConfig{}; }
inline GateConfig empirical_gate() { return GateConfig{0.001024, 0.60, 0.35}; }

struct GateResult {
  bool nc_ok = false;
  bool ncp_ok = false;
  bool lgs_ok = false;
  bool passed = false;

  std::vector<std::string> failed_conditions() const;
};

// All comparisons are inclusive; a 1e-12 absolute slack keeps values that
// sit exactly on a boundary from failing under floating-point rounding.
GateResult apply_gate(const DiagnosticSet& d, const GateConfig& g);

struct CalibrationMeta {
  DgpKind kind = DgpKind::Ar1;
  double rho = 1.04;
  double sigma = 0.10;
  int T = 80;
  int n = 500;
  std::uint64_t seed = 0;
};

// Per-statistic 75th-percentile thresholds pooled from simulated windows,
// in kStatNames order, plus the calibration regime that produced them.
struct ThresholdVector {
  std::array<double, 12> values{};
  CalibrationMeta meta;
};

enum class EpisodeClass { None, Mild, Moderate, Strong };

const char* to_string(EpisodeClass c);

// Class boundaries at 0.36 / 0.57 / 0.75, lower-inclusive.
EpisodeClass class_of_score(double score);

struct EpisodeVerdict {
  GateResult gate;
  std::array<double, 4> layer_fractions{};  // d1..d4
  double score = 0.0;                       // S in [0,1]
  EpisodeClass cls = EpisodeClass::None;
  std::vector<std::string> notes;
};

// Stage B: composite intensity score. Gate failure short-circuits to score
// 0 / class None. Otherwise d_j is the fraction of layer-j statistics that
// are present and exceed their thresholds (absent statistics shrink the
// denominator), and S = (d1 + 1.5 d2 + 3 d3 + 1.5 d4) / 7.
EpisodeVerdict score_episode(const DiagnosticSet& d, const ThresholdVector& t,
                             const GateResult& gate);

// Simulate n replications of the regime, run detection and diagnostics on
// each, pool the defined window-level values per statistic, and take the
// 75th percentile. Replication seeds derive from (seed, index) so execution
// order cannot change the pool.
ThresholdVector calibrate(const DgpSpec& regime, int T, int n,
                          std::uint64_t seed, const WindowConfig& wc = {});

// Flat key-value text document, shareable and diffable; round-trips exactly.
std::string thresholds_to_text(const ThresholdVector& t);
ThresholdVector thresholds_from_text(const std::string& text);
void write_thresholds(const ThresholdVector& t, const std::string& path);
ThresholdVector read_thresholds(const std::string& path);

}  // namespace pathexp
