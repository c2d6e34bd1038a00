#pragma once

#include <optional>
#include <vector>

#include "pathexp/pipeline.hpp"

namespace pathexp {

enum class PairClass { NotCoExplosive, Borderline, CoExplosive };

const char* to_string(PairClass c);

// A matched pair of gate-passing episodes; indices into the two episode
// lists, overlap in calendar periods.
struct EpisodePair {
  int idx1 = 0;
  int idx2 = 0;
  int overlap = 0;
};

struct Concordance {
  std::optional<double> spearman;
  std::optional<double> kendall;
  std::optional<double> sign_concordance;
};

struct PairCriteria {
  double jaccard_min = 0.67;
  double spearman_min = 0.60;
  double sign_concordance_min = 0.67;
};

struct CoExplosionReport {
  std::vector<EpisodeAnalysis> episodes_1;  // gate-passing, temporal order
  std::vector<EpisodeAnalysis> episodes_2;
  std::vector<EpisodePair> pairs;
  double jaccard = 0.0;
  Concordance concordance;
  PairClass classification = PairClass::NotCoExplosive;
};

// Pairs co-occur when their calendar intervals overlap in at least one
// period. Greedy one-to-one matching by largest overlap, ties to the
// earliest pair. Windows are matched on period stamps.
std::vector<EpisodePair> match_episodes(const std::vector<EpisodeWindow>& w1,
                                        const std::vector<EpisodeWindow>& w2);

// Intensity concordance over matched pairs ordered by episode start time.
// With fewer than two pairs all three statistics are undefined. The sign
// concordance is the fraction of consecutive between-pair score increments
// whose signs agree across the two series.
Concordance concordance_stats(const std::vector<double>& scores1,
                              const std::vector<double>& scores2);

// Assemble the report from two gate-passing episode lists.
CoExplosionReport classify_pair(std::vector<EpisodeAnalysis> gate_passing_1,
                                std::vector<EpisodeAnalysis> gate_passing_2,
                                const PairCriteria& crit = {});

// Full pairwise pipeline: analyse both series, keep gate-passing episodes,
// match, measure concordance, classify.
CoExplosionReport analyze_pair(const NormalizedSeries& s1,
                               const NormalizedSeries& s2,
                               const PipelineConfig& cfg,
                               const ThresholdVector& thresholds,
                               const PairCriteria& crit = {});

}  // namespace pathexp
