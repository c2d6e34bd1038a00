#include "pathexp/coexplosion.hpp"

#include <algorithm>

#include "pathexp/stats.hpp"

namespace pathexp {

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::NotCoExplosive: return "NotCoExplosive";
    case PairClass::Borderline: return "Borderline";
    case PairClass::CoExplosive: return "CoExplosive";
  }
  return "NotCoExplosive";
}

std::vector<EpisodePair> match_episodes(const std::vector<EpisodeWindow>& w1,
                                        const std::vector<EpisodeWindow>& w2) {
  struct Overlap {
    int overlap;
    int i, j;
  };
  std::vector<Overlap> all;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    for (std::size_t j = 0; j < w2.size(); ++j) {
      const int lo = std::max(w1[i].start_period, w2[j].start_period);
      const int hi = std::min(w1[i].end_period, w2[j].end_period);
      const int overlap = hi - lo + 1;
      if (overlap >= 1) {
        all.push_back({overlap, static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  // Greedy one-to-one: largest overlap first, ties to the earliest pair.
  std::sort(all.begin(), all.end(), [&](const Overlap& a, const Overlap& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (w1[static_cast<std::size_t>(a.i)].start_period !=
        w1[static_cast<std::size_t>(b.i)].start_period) {
      return w1[static_cast<std::size_t>(a.i)].start_period <
             w1[static_cast<std::size_t>(b.i)].start_period;
    }
    return w2[static_cast<std::size_t>(a.j)].start_period <
           w2[static_cast<std::size_t>(b.j)].start_period;
  });
  std::vector<bool> used1(w1.size(), false), used2(w2.size(), false);
  std::vector<EpisodePair> pairs;
  for (const Overlap& o : all) {
    if (used1[static_cast<std::size_t>(o.i)] ||
        used2[static_cast<std::size_t>(o.j)]) {
      continue;
    }
    used1[static_cast<std::size_t>(o.i)] = true;
    used2[static_cast<std::size_t>(o.j)] = true;
    pairs.push_back({o.i, o.j, o.overlap});
  }
  // Report pairs in temporal order of the first series' episodes.
  std::sort(pairs.begin(), pairs.end(),
            [&](const EpisodePair& a, const EpisodePair& b) {
              return w1[static_cast<std::size_t>(a.idx1)].start_period <
                     w1[static_cast<std::size_t>(b.idx1)].start_period;
            });
  return pairs;
}

Concordance concordance_stats(const std::vector<double>& scores1,
                              const std::vector<double>& scores2) {
  Concordance c;
  if (scores1.size() != scores2.size() || scores1.size() < 2) return c;
  c.spearman = spearman(scores1, scores2);
  c.kendall = kendall(scores1, scores2);
  int agree = 0;
  const std::size_t increments = scores1.size() - 1;
  for (std::size_t i = 0; i + 1 < scores1.size(); ++i) {
    const double d1 = scores1[i + 1] - scores1[i];
    const double d2 = scores2[i + 1] - scores2[i];
    const int s1 = d1 > 0.0 ? 1 : (d1 < 0.0 ? -1 : 0);
    const int s2 = d2 > 0.0 ? 1 : (d2 < 0.0 ? -1 : 0);
    if (s1 == s2) ++agree;
  }
  c.sign_concordance =
      static_cast<double>(agree) / static_cast<double>(increments);
  return c;
}

CoExplosionReport classify_pair(std::vector<EpisodeAnalysis> gate_passing_1,
                                std::vector<EpisodeAnalysis> gate_passing_2,
                                const PairCriteria& crit) {
  CoExplosionReport r;
  r.episodes_1 = std::move(gate_passing_1);
  r.episodes_2 = std::move(gate_passing_2);

  std::vector<EpisodeWindow> w1, w2;
  for (const auto& e : r.episodes_1) w1.push_back(e.window);
  for (const auto& e : r.episodes_2) w2.push_back(e.window);
  r.pairs = match_episodes(w1, w2);

  const double denom = static_cast<double>(w1.size()) +
                       static_cast<double>(w2.size()) -
                       static_cast<double>(r.pairs.size());
  r.jaccard = denom > 0.0 ? static_cast<double>(r.pairs.size()) / denom : 0.0;

  std::vector<double> s1, s2;
  for (const EpisodePair& p : r.pairs) {
    s1.push_back(r.episodes_1[static_cast<std::size_t>(p.idx1)].verdict.score);
    s2.push_back(r.episodes_2[static_cast<std::size_t>(p.idx2)].verdict.score);
  }
  r.concordance = concordance_stats(s1, s2);

  if (r.episodes_1.empty() || r.episodes_2.empty() ||
      r.jaccard < crit.jaccard_min) {
    r.classification = PairClass::NotCoExplosive;
  } else if (!r.concordance.spearman.has_value() &&
             !r.concordance.sign_concordance.has_value()) {
    // Co-occurrence holds but concordance is undetermined.
    r.classification = PairClass::Borderline;
  } else {
    const bool rho_ok = r.concordance.spearman.has_value() &&
                        *r.concordance.spearman >= crit.spearman_min;
    const bool sc_ok = r.concordance.sign_concordance.has_value() &&
                       *r.concordance.sign_concordance >=
                           crit.sign_concordance_min;
    r.classification =
        rho_ok || sc_ok ? PairClass::CoExplosive : PairClass::NotCoExplosive;
  }
  return r;
}

CoExplosionReport analyze_pair(const NormalizedSeries& s1,
                               const NormalizedSeries& s2,
                               const PipelineConfig& cfg,
                               const ThresholdVector& thresholds,
                               const PairCriteria& crit) {
  auto keep_passing = [](std::vector<EpisodeAnalysis> all) {
    std::vector<EpisodeAnalysis> out;
    for (auto& e : all) {
      if (e.gate.passed) out.push_back(std::move(e));
    }
    return out;
  };
  return classify_pair(keep_passing(analyze_series(s1, cfg, thresholds)),
                       keep_passing(analyze_series(s2, cfg, thresholds)),
                       crit);
}

}  // namespace pathexp
