#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathexp/classify.hpp"
#include "pathexp/coexplosion.hpp"
#include "pathexp/errors.hpp"
#include "pathexp/io.hpp"
#include "pathexp/pipeline.hpp"
#include "pathexp/simulate.hpp"
#include "pathexp/study.hpp"

namespace {

using namespace pathexp;

struct CommonOpts {
  std::string gate = "strict";
  std::string thresholds_path;
  int calibrate_T = 0;  // 0 means "not given"
  double calib_rho = 1.04;
  double calib_sigma = 0.10;
  int calib_n = 500;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string out;
  int max_windows = 2;
  int w_max = 15;
  bool plot_data = false;
};

void add_window_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--max-windows", o.max_windows,
                  "Maximum retained windows per series");
  cmd->add_option("--w-max", o.w_max, "Maximum window width in observations");
}

void add_threshold_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--thresholds", o.thresholds_path,
                  "Read intensity thresholds from a file");
  cmd->add_option("--calibrate-T", o.calibrate_T,
                  "Calibrate intensity thresholds in-run at this length");
  cmd->add_option("--calib-rho", o.calib_rho, "Calibration AR(1) root");
  cmd->add_option("--calib-sigma", o.calib_sigma, "Calibration innovation sd");
  cmd->add_option("--calib-n", o.calib_n, "Calibration replications");
  cmd->add_option("--seed", o.seed, "Random seed");
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--out", o.out, "Output path (stdout when omitted)");
}

PipelineConfig pipeline_config(const CommonOpts& o) {
  PipelineConfig cfg;
  cfg.gate = o.gate == "empirical" ? empirical_gate() : strict_gate();
  cfg.window.max_windows = o.max_windows;
  cfg.window.w_max = o.w_max;
  return cfg;
}

// Exactly one threshold source: a file or an inline calibration spec.
ThresholdVector resolve_thresholds(const CommonOpts& o) {
  const bool from_file = !o.thresholds_path.empty();
  const bool inline_spec = o.calibrate_T > 0;
  if (from_file == inline_spec) {
    throw BadConfigError(
        "exactly one of --thresholds and --calibrate-T is required");
  }
  if (from_file) return read_thresholds(o.thresholds_path);
  DgpSpec regime{DgpKind::Ar1, o.calib_rho, o.calib_sigma, o.calibrate_T, 50,
                 1.0};
  return calibrate(regime, o.calibrate_T, o.calib_n, o.seed);
}

void emit(const CommonOpts& o, const std::string& content) {
  if (o.out.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    write_text_file(o.out, content);
  }
}

int run_analyze(const std::string& input, const CommonOpts& o) {
  const ThresholdVector thr = resolve_thresholds(o);
  const PipelineConfig cfg = pipeline_config(o);
  const std::vector<RawSeries> series = read_csv(input);

  std::vector<std::pair<std::string, std::vector<EpisodeAnalysis>>> per_series;
  std::string plot;
  for (const RawSeries& raw : series) {
    const NormalizedSeries norm = normalize(raw);
    per_series.emplace_back(raw.label, analyze_series(norm, cfg, thr));
    if (o.plot_data) plot += plot_data_csv(norm, per_series.back().second);
  }
  const auto rows = make_report(per_series);
  emit(o, o.format == "json" ? report_to_json(rows) : report_to_csv(rows));
  if (o.plot_data) {
    if (o.out.empty()) {
      throw BadConfigError("--plot-data needs -o to derive the data path");
    }
    write_text_file(o.out + ".plot.csv", plot);
  }
  return 0;
}

int run_co_analyze(const std::string& input, std::string label1,
                   std::string label2, const CommonOpts& o) {
  const ThresholdVector thr = resolve_thresholds(o);
  const PipelineConfig cfg = pipeline_config(o);
  const std::vector<RawSeries> series = read_csv(input);
  if (series.size() == 2 && label1.empty() && label2.empty()) {
    label1 = series[0].label;
    label2 = series[1].label;
  }
  const RawSeries* s1 = nullptr;
  const RawSeries* s2 = nullptr;
  for (const RawSeries& s : series) {
    if (s.label == label1) s1 = &s;
    if (s.label == label2) s2 = &s;
  }
  if (s1 == nullptr || s2 == nullptr) {
    throw BadConfigError("series pair '" + label1 + "', '" + label2 +
                         "' not found in " + input);
  }
  const CoExplosionReport report =
      analyze_pair(normalize(*s1), normalize(*s2), cfg, thr);
  emit(o, o.format == "json" ? coexplosion_to_json(label1, label2, report)
                             : coexplosion_to_csv(label1, label2, report));
  return 0;
}

int run_calibrate(const CommonOpts& o) {
  if (o.calibrate_T <= 0) {
    throw BadConfigError("calibrate requires --calibrate-T");
  }
  DgpSpec regime{DgpKind::Ar1, o.calib_rho, o.calib_sigma, o.calibrate_T, 50,
                 1.0};
  const ThresholdVector thr =
      calibrate(regime, o.calibrate_T, o.calib_n, o.seed);
  emit(o, thresholds_to_text(thr));
  return 0;
}

int run_simulate(const CommonOpts& o, int n) {
  StudyConfig cfg;
  cfg.n = n;
  cfg.seed = o.seed;
  cfg.window.max_windows = o.max_windows;
  cfg.window.w_max = o.w_max;

  const ThresholdVector* thr = nullptr;
  ThresholdVector loaded;
  if (!o.thresholds_path.empty()) {
    loaded = read_thresholds(o.thresholds_path);
    thr = &loaded;
  }
  const ReplicationTable table =
      run_study(default_regimes(), default_scenarios(), cfg, thr);

  if (o.format == "json") {
    emit(o, study_to_json(table));
    return 0;
  }
  if (o.out.empty()) {
    std::fputs(regimes_to_csv(table).c_str(), stdout);
    std::fputs(scenarios_to_csv(table).c_str(), stdout);
  } else {
    write_text_file(o.out + ".regimes.csv", regimes_to_csv(table));
    write_text_file(o.out + ".scenarios.csv", scenarios_to_csv(table));
  }
  return 0;
}

const char* error_kind(const Error& e) {
  if (dynamic_cast<const ZeroOriginError*>(&e)) return "ZeroOrigin";
  if (dynamic_cast<const NonFiniteError*>(&e)) return "NonFinite";
  if (dynamic_cast<const TooShortError*>(&e)) return "TooShort";
  if (dynamic_cast<const EmptyInputError*>(&e)) return "Empty";
  if (dynamic_cast<const ZeroDenominatorError*>(&e)) return "ZeroDenominator";
  if (dynamic_cast<const AllDegenerateError*>(&e)) return "AllDegenerate";
  if (dynamic_cast<const CalibrationError*>(&e)) return "Calibration";
  if (dynamic_cast<const MalformedCsvError*>(&e)) return "MalformedCsv";
  if (dynamic_cast<const InteriorGapError*>(&e)) return "InteriorGap";
  if (dynamic_cast<const NonMonotonePeriodsError*>(&e)) {
    return "NonMonotonePeriods";
  }
  if (dynamic_cast<const BadConfigError*>(&e)) return "BadConfig";
  if (dynamic_cast<const IoError*>(&e)) return "Io";
  return "Error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pathexp: detects, scores and classifies path-explosive episodes in "
      "annual time series, and runs the seeded validation study"};
  app.require_subcommand(1);

  CommonOpts a_opts, c_opts, k_opts, s_opts;
  std::string a_input, c_input, c_label1, c_label2;
  int sim_n = 500;

  CLI::App* analyze =
      app.add_subcommand("analyze", "Detect and classify episodes per series");
  analyze->add_option("input", a_input, "Input CSV")->required();
  analyze->add_option("--gate", a_opts.gate, "Gate variant")
      ->check(CLI::IsMember({"strict", "empirical"}));
  analyze->add_flag("--plot-data", a_opts.plot_data,
                    "Also write per-window series for plotting");
  add_threshold_flags(analyze, a_opts);
  add_window_flags(analyze, a_opts);
  add_output_flags(analyze, a_opts);

  CLI::App* co = app.add_subcommand(
      "co-analyze", "Pairwise co-explosion report for two series");
  co->add_option("input", c_input, "Input CSV")->required();
  co->add_option("series1", c_label1, "First series label");
  co->add_option("series2", c_label2, "Second series label");
  co->add_option("--gate", c_opts.gate, "Gate variant")
      ->check(CLI::IsMember({"strict", "empirical"}));
  add_threshold_flags(co, c_opts);
  add_window_flags(co, c_opts);
  add_output_flags(co, c_opts);

  CLI::App* calib = app.add_subcommand(
      "calibrate", "Write an intensity threshold document");
  add_threshold_flags(calib, k_opts);
  add_window_flags(calib, k_opts);
  add_output_flags(calib, k_opts);

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the seeded Monte Carlo study and write the tables");
  sim->add_option("-n,--replications", sim_n, "Replications per regime");
  sim->add_option("--thresholds", s_opts.thresholds_path,
                  "Use a threshold document instead of calibrating in-run");
  sim->add_option("--seed", s_opts.seed, "Master seed");
  add_window_flags(sim, s_opts);
  add_output_flags(sim, s_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(a_input, a_opts);
    if (co->parsed()) return run_co_analyze(c_input, c_label1, c_label2, c_opts);
    if (calib->parsed()) return run_calibrate(k_opts);
    if (sim->parsed()) return run_simulate(s_opts, sim_n);
  } catch (const Error& e) {
    nlohmann::json err;
    err["error"] = error_kind(e);
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = "Internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
