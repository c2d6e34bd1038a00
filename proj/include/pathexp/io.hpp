#pragma once

#include <string>
#include <vector>

#include "pathexp/coexplosion.hpp"
#include "pathexp/pipeline.hpp"
#include "pathexp/series.hpp"

namespace pathexp {

// Parse a CSV whose first column is the period stamp and every further
// column one series; a header row is required. Blank cells at the head or
// tail of a column trim that series' range; interior blanks are an error.
std::vector<RawSeries> read_csv(const std::string& path);
std::vector<RawSeries> parse_csv(const std::string& text,
                                 const std::string& origin = "<string>");

// One row per detected window, mirroring the published table columns and
// carrying the remaining statistics in an extended view.
struct EpisodeReportRow {
  std::string series;
  EpisodeAnalysis analysis;
};

// Rows sorted by series label, then start period.
std::vector<EpisodeReportRow> make_report(
    const std::vector<std::pair<std::string, std::vector<EpisodeAnalysis>>>&
        per_series);

std::string report_to_csv(const std::vector<EpisodeReportRow>& rows);
std::string report_to_json(const std::vector<EpisodeReportRow>& rows);

std::string coexplosion_to_json(const std::string& label1,
                                const std::string& label2,
                                const CoExplosionReport& report);
std::string coexplosion_to_csv(const std::string& label1,
                               const std::string& label2,
                               const CoExplosionReport& report);

// Tidy per-window series (y_norm, g, nc, l) for external plotting.
std::string plot_data_csv(const NormalizedSeries& s,
                          const std::vector<EpisodeAnalysis>& episodes);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a over a canonical textual form; stable across platforms and builds.
std::string config_hash(const std::string& canonical_text);

}  // namespace pathexp
