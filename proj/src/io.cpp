#include "pathexp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pathexp/errors.hpp"
#include "pathexp/study.hpp"

namespace pathexp {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_int(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return end != nullptr && *end == '\0';
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != nullptr && *end == '\0';
}

std::string fmt_stat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string opt_cell(const std::optional<double>& v) {
  return v.has_value() ? fmt_stat(*v) : std::string();
}

json opt_json(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return *v;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

json episode_to_json(const std::string& series, const EpisodeAnalysis& e) {
  json j;
  j["series"] = series;
  j["start_period"] = e.window.start_period;
  j["end_period"] = e.window.end_period;
  j["t0"] = e.window.t0;
  j["t1"] = e.window.t1;
  j["width"] = e.window.width();
  j["growth"] = e.window.growth;
  j["nc_mean"] = e.diag.layer3.nc_mean;
  j["nc_positivity"] = e.diag.layer3.nc_positivity;
  j["lgs"] = e.diag.layer4.lgs;
  j["log_linearity"] = e.diag.layer4.log_linearity;
  j["gate"] = e.gate.passed ? "pass" : "fail";
  j["gate_failed"] = e.gate.failed_conditions();
  j["score"] = e.verdict.score;
  j["class"] = to_string(e.verdict.cls);
  j["alpha2_norm"] = e.diag.layer1.alpha2_norm;
  j["convexity_persistence"] = e.diag.layer1.convexity_persistence;
  j["mean_growth"] = e.diag.layer1.mean_growth;
  j["growth_trend_norm"] = opt_json(e.diag.layer2.growth_trend_norm);
  j["growth_sign_persistence"] = e.diag.layer2.growth_sign_persistence;
  j["growth_ratio"] = opt_json(e.diag.layer2.growth_ratio);
  j["nc_trend_norm"] = opt_json(e.diag.layer3.nc_trend_norm);
  j["log_growth_trend"] = opt_json(e.diag.layer4.log_growth_trend);
  j["log_ok"] = e.diag.log_ok;
  j["implied_rho"] = opt_json(e.diag.implied_rho);
  j["baseline"] = opt_json(e.baseline);
  j["layer_fractions"] = e.verdict.layer_fractions;
  j["notes"] = e.verdict.notes;
  return j;
}

}  // namespace

std::vector<RawSeries> parse_csv(const std::string& text,
                                 const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) {
    throw MalformedCsvError(origin + ": empty file");
  }
  if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
      line[2] == '\xBF') {
    line = line.substr(3);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2) {
    throw MalformedCsvError(origin +
                            ": header must name a period column and at least "
                            "one series column");
  }
  const std::size_t n_series = header.size() - 1;

  std::vector<int> periods;
  std::vector<std::vector<std::optional<double>>> columns(n_series);
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw MalformedCsvError(origin + ": row " + std::to_string(row) +
                              " has " + std::to_string(cells.size()) +
                              " cells, expected " +
                              std::to_string(header.size()));
    }
    long period = 0;
    if (!parse_int(cells[0], period)) {
      throw MalformedCsvError(origin + ": row " + std::to_string(row) +
                              ": period '" + cells[0] +
                              "' is not an integer");
    }
    if (!periods.empty() && period != periods.back() + 1) {
      throw NonMonotonePeriodsError(
          origin + ": row " + std::to_string(row) +
          ": periods must increase by 1 (got " + std::to_string(period) +
          " after " + std::to_string(periods.back()) + ")");
    }
    periods.push_back(static_cast<int>(period));
    for (std::size_t c = 0; c < n_series; ++c) {
      const std::string& cell = cells[c + 1];
      if (cell.empty()) {
        columns[c].push_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      if (!parse_double(cell, v)) {
        throw MalformedCsvError(origin + ": row " + std::to_string(row) +
                                ", series '" + header[c + 1] + "': cell '" +
                                cell + "' is not numeric");
      }
      columns[c].push_back(v);
    }
  }
  if (periods.empty()) {
    throw MalformedCsvError(origin + ": no data rows");
  }

  std::vector<RawSeries> out;
  for (std::size_t c = 0; c < n_series; ++c) {
    const auto& col = columns[c];
    std::size_t first = 0, last = col.size();
    while (first < col.size() && !col[first].has_value()) ++first;
    while (last > first && !col[last - 1].has_value()) --last;
    if (first == last) {
      throw MalformedCsvError(origin + ": series '" + header[c + 1] +
                              "' has no values");
    }
    RawSeries s;
    s.label = header[c + 1];
    for (std::size_t i = first; i < last; ++i) {
      if (!col[i].has_value()) {
        throw InteriorGapError(origin + ": series '" + header[c + 1] +
                               "' has an interior blank at row " +
                               std::to_string(i + 2) + " (period " +
                               std::to_string(periods[i]) + ")");
      }
      s.periods.push_back(periods[i]);
      s.values.push_back(*col[i]);
    }
    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RawSeries> read_csv(const std::string& path) {
  return parse_csv(read_text_file(path), path);
}

std::vector<EpisodeReportRow> make_report(
    const std::vector<std::pair<std::string, std::vector<EpisodeAnalysis>>>&
        per_series) {
  std::vector<EpisodeReportRow> rows;
  for (const auto& [label, episodes] : per_series) {
    for (const EpisodeAnalysis& e : episodes) {
      rows.push_back({label, e});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EpisodeReportRow& a, const EpisodeReportRow& b) {
                     if (a.series != b.series) return a.series < b.series;
                     return a.analysis.window.start_period <
                            b.analysis.window.start_period;
                   });
  return rows;
}

std::string report_to_csv(const std::vector<EpisodeReportRow>& rows) {
  std::ostringstream os;
  os << "series,start_period,end_period,width,growth,nc_mean,nc_positivity,"
        "lgs,log_linearity,gate,gate_failed,score,class,alpha2_norm,"
        "convexity_persistence,mean_growth,growth_trend_norm,"
        "growth_sign_persistence,growth_ratio,nc_trend_norm,log_growth_trend,"
        "log_ok,implied_rho,baseline,notes\n";
  for (const EpisodeReportRow& r : rows) {
    const EpisodeAnalysis& e = r.analysis;
    os << r.series << ',' << e.window.start_period << ','
       << e.window.end_period << ',' << e.window.width() << ','
       << fmt_stat(e.window.growth) << ',' << fmt_stat(e.diag.layer3.nc_mean)
       << ',' << fmt_stat(e.diag.layer3.nc_positivity) << ','
       << fmt_stat(e.diag.layer4.lgs) << ','
       << fmt_stat(e.diag.layer4.log_linearity) << ','
       << (e.gate.passed ? "pass" : "fail") << ','
       << join(e.gate.failed_conditions(), ";") << ','
       << fmt_stat(e.verdict.score) << ',' << to_string(e.verdict.cls) << ','
       << fmt_stat(e.diag.layer1.alpha2_norm) << ','
       << fmt_stat(e.diag.layer1.convexity_persistence) << ','
       << fmt_stat(e.diag.layer1.mean_growth) << ','
       << opt_cell(e.diag.layer2.growth_trend_norm) << ','
       << fmt_stat(e.diag.layer2.growth_sign_persistence) << ','
       << opt_cell(e.diag.layer2.growth_ratio) << ','
       << opt_cell(e.diag.layer3.nc_trend_norm) << ','
       << opt_cell(e.diag.layer4.log_growth_trend) << ','
       << (e.diag.log_ok ? "true" : "false") << ','
       << opt_cell(e.diag.implied_rho) << ',' << opt_cell(e.baseline) << ','
       << join(e.verdict.notes, ";") << '\n';
  }
  return os.str();
}

std::string report_to_json(const std::vector<EpisodeReportRow>& rows) {
  json j;
  j["schema_version"] = 1;
  j["episodes"] = json::array();
  for (const EpisodeReportRow& r : rows) {
    j["episodes"].push_back(episode_to_json(r.series, r.analysis));
  }
  return j.dump(2) + "\n";
}

std::string coexplosion_to_json(const std::string& label1,
                                const std::string& label2,
                                const CoExplosionReport& report) {
  json j;
  j["schema_version"] = 1;
  j["series_1"] = label1;
  j["series_2"] = label2;
  j["jaccard"] = report.jaccard;
  j["spearman"] = opt_json(report.concordance.spearman);
  j["kendall"] = opt_json(report.concordance.kendall);
  j["sign_concordance"] = opt_json(report.concordance.sign_concordance);
  j["classification"] = to_string(report.classification);
  j["pairs"] = json::array();
  for (const EpisodePair& p : report.pairs) {
    const EpisodeAnalysis& e1 =
        report.episodes_1[static_cast<std::size_t>(p.idx1)];
    const EpisodeAnalysis& e2 =
        report.episodes_2[static_cast<std::size_t>(p.idx2)];
    json pj;
    pj["overlap_periods"] = p.overlap;
    pj["window_1"] = {e1.window.start_period, e1.window.end_period};
    pj["window_2"] = {e2.window.start_period, e2.window.end_period};
    pj["score_1"] = e1.verdict.score;
    pj["score_2"] = e2.verdict.score;
    j["pairs"].push_back(pj);
  }
  j["episodes_1"] = json::array();
  for (const EpisodeAnalysis& e : report.episodes_1) {
    j["episodes_1"].push_back(episode_to_json(label1, e));
  }
  j["episodes_2"] = json::array();
  for (const EpisodeAnalysis& e : report.episodes_2) {
    j["episodes_2"].push_back(episode_to_json(label2, e));
  }
  return j.dump(2) + "\n";
}

std::string coexplosion_to_csv(const std::string& label1,
                               const std::string& label2,
                               const CoExplosionReport& report) {
  std::ostringstream os;
  os << "series_1,series_2,episodes_1,episodes_2,pairs,jaccard,spearman,"
        "kendall,sign_concordance,classification\n";
  os << label1 << ',' << label2 << ',' << report.episodes_1.size() << ','
     << report.episodes_2.size() << ',' << report.pairs.size() << ','
     << fmt_stat(report.jaccard) << ','
     << opt_cell(report.concordance.spearman) << ','
     << opt_cell(report.concordance.kendall) << ','
     << opt_cell(report.concordance.sign_concordance) << ','
     << to_string(report.classification) << '\n';
  return os.str();
}

std::string plot_data_csv(const NormalizedSeries& s,
                          const std::vector<EpisodeAnalysis>& episodes) {
  std::ostringstream os;
  os << "series,window,start_period,end_period,period,y_norm,g,nc,l\n";
  for (std::size_t wi = 0; wi < episodes.size(); ++wi) {
    const EpisodeWindow& w = episodes[wi].window;
    for (int t = w.t0; t <= w.t1; ++t) {
      const std::size_t u = static_cast<std::size_t>(t);
      os << s.label << ',' << wi << ',' << w.start_period << ','
         << w.end_period << ',' << s.periods[u] << ','
         << fmt_stat(s.values[u]) << ',';
      if (t > w.t0) {
        os << fmt_stat((s.values[u] - s.values[u - 1]) / s.values[u - 1]);
      }
      os << ',';
      if (t >= w.t0 + 2 && std::abs(s.values[u - 2]) >= 1e-8) {
        const double d2 =
            s.values[u] - 2.0 * s.values[u - 1] + s.values[u - 2];
        os << fmt_stat(d2 / s.values[u - 2]);
      }
      os << ',';
      if (t > w.t0 && s.values[u] > 0.0 && s.values[u - 1] > 0.0) {
        os << fmt_stat(std::log(s.values[u]) - std::log(s.values[u - 1]));
      }
      os << '\n';
    }
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os.good()) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

std::string config_hash(const std::string& canonical_text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string study_to_json(const ReplicationTable& t) {
  json j;
  j["schema_version"] = 1;
  j["n"] = t.n;
  j["seed"] = t.seed;
  j["config_hash"] = t.config_hash;
  json thr;
  for (std::size_t i = 0; i < kStatNames.size(); ++i) {
    thr[kStatNames[i]] = t.thresholds.values[i];
  }
  thr["meta"] = {
      {"kind", t.thresholds.meta.kind == DgpKind::Ar1 ? "ar1" : "i2"},
      {"rho", t.thresholds.meta.rho},
      {"sigma", t.thresholds.meta.sigma},
      {"T", t.thresholds.meta.T},
      {"n", t.thresholds.meta.n},
      {"seed", t.thresholds.meta.seed},
  };
  j["thresholds"] = thr;
  j["regimes"] = json::array();
  for (const RegimeRow& r : t.regimes) {
    j["regimes"].push_back({
        {"regime", r.regime},
        {"gate", r.gate},
        {"n", r.n},
        {"seed", r.seed},
        {"config_hash", r.config_hash},
        {"mean_windows", r.mean_windows},
        {"pct_none", r.pct_none},
        {"gate_all", r.gate_all},
        {"gate_nc", r.gate_nc},
        {"gate_ncp", r.gate_ncp},
        {"gate_lgs", r.gate_lgs},
        {"nc_mean_pooled", r.nc_mean_pooled},
        {"lgs_mean_pooled", r.lgs_mean_pooled},
        {"pct_mild_plus", r.pct_mild_plus},
        {"pct_any_positive_score", r.pct_any_positive_score},
        {"share_class_none", r.share_class_none},
        {"share_class_mild", r.share_class_mild},
        {"share_class_moderate", r.share_class_moderate},
        {"share_class_strong", r.share_class_strong},
    });
  }
  j["scenarios"] = json::array();
  for (const ScenarioRow& r : t.scenarios) {
    j["scenarios"].push_back({
        {"scenario", r.scenario},
        {"gate", r.gate},
        {"n", r.n},
        {"seed", r.seed},
        {"config_hash", r.config_hash},
        {"j_mean", r.j_mean},
        {"pct_j_ge_067", r.pct_j_ge_067},
        {"rho_s_mean", r.rho_s_mean},
        {"n_rho_s_defined", r.n_rho_s_defined},
        {"pct_classified", r.pct_classified},
        {"pct_borderline", r.pct_borderline},
    });
  }
  return j.dump(2) + "\n";
}

}  // namespace pathexp
