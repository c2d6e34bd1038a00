#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathexp/classify.hpp"
#include "pathexp/coexplosion.hpp"
#include "pathexp/errors.hpp"
#include "pathexp/io.hpp"
#include "pathexp/pipeline.hpp"
#include "pathexp/series.hpp"
#include "pathexp/simulate.hpp"
#include "pathexp/stats.hpp"
#include "pathexp/study.hpp"
#include "pathexp/window.hpp"

namespace py = pybind11;
using namespace pathexp;

namespace {

std::vector<double> winsorize_wrap(const std::vector<double>& v, double lo,
                                   double hi) {
  return winsorize(v, lo, hi);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Path-explosive episode detection, scoring and co-explosion analysis";

  py::register_exception<Error>(m, "PathexpError", PyExc_RuntimeError);

  // ------------------------------------------------------------- series
  py::class_<RawSeries>(m, "RawSeries")
      .def(py::init([](std::string label, std::vector<int> periods,
                       std::vector<double> values) {
             RawSeries s;
             s.label = std::move(label);
             s.periods = std::move(periods);
             s.values = std::move(values);
             validate(s);
             return s;
           }),
           py::arg("label"), py::arg("periods"), py::arg("values"))
      .def_readonly("label", &RawSeries::label)
      .def_readonly("periods", &RawSeries::periods)
      .def_readonly("values", &RawSeries::values)
      .def("__len__", &RawSeries::size)
      .def("__repr__", [](const RawSeries& s) {
        return "RawSeries('" + s.label + "', n=" + std::to_string(s.size()) +
               ")";
      });

  py::class_<NormalizedSeries>(m, "NormalizedSeries")
      .def_readonly("label", &NormalizedSeries::label)
      .def_readonly("periods", &NormalizedSeries::periods)
      .def_readonly("values", &NormalizedSeries::values)
      .def_readonly("origin_value", &NormalizedSeries::origin_value)
      .def("__len__", &NormalizedSeries::size);

  m.def("normalize", &normalize, py::arg("series"),
        "Index-normalise a series by its first value");
  m.def(
      "second_diff",
      [](const std::vector<double>& v) { return second_diff(v); },
      py::arg("values"));

  // -------------------------------------------------------------- stats
  py::class_<LinearFit>(m, "LinearFit")
      .def_readonly("intercept", &LinearFit::intercept)
      .def_readonly("slope", &LinearFit::slope)
      .def_readonly("residuals", &LinearFit::residuals)
      .def_readonly("residual_sd", &LinearFit::residual_sd);

  py::class_<QuadraticFit>(m, "QuadraticFit")
      .def_readonly("a0", &QuadraticFit::a0)
      .def_readonly("a1", &QuadraticFit::a1)
      .def_readonly("a2", &QuadraticFit::a2)
      .def_readonly("residuals", &QuadraticFit::residuals);

  m.def("quantile",
        [](const std::vector<double>& v, double p) { return quantile(v, p); },
        py::arg("values"), py::arg("p"));
  m.def("winsorize", &winsorize_wrap, py::arg("values"),
        py::arg("lo_pct") = 0.01, py::arg("hi_pct") = 0.99);
  m.def("ols_linear",
        [](const std::vector<double>& y) { return ols_linear(y); },
        py::arg("y"));
  m.def("ols_quadratic",
        [](const std::vector<double>& y) { return ols_quadratic(y); },
        py::arg("y"));
  m.def("spearman",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return spearman(a, b);
        },
        py::arg("a"), py::arg("b"),
        "Spearman rank correlation; None when degenerate");
  m.def("kendall",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return kendall(a, b);
        },
        py::arg("a"), py::arg("b"), "Kendall tau-b; None when degenerate");

  // ------------------------------------------------------------- window
  py::class_<WindowConfig>(m, "WindowConfig")
      .def(py::init<>())
      .def_readwrite("open_run", &WindowConfig::open_run)
      .def_readwrite("close_run", &WindowConfig::close_run)
      .def_readwrite("w_min", &WindowConfig::w_min)
      .def_readwrite("w_max", &WindowConfig::w_max)
      .def_readwrite("min_growth", &WindowConfig::min_growth)
      .def_readwrite("min_gap", &WindowConfig::min_gap)
      .def_readwrite("max_windows", &WindowConfig::max_windows);

  py::class_<EpisodeWindow>(m, "EpisodeWindow")
      .def_readonly("t0", &EpisodeWindow::t0)
      .def_readonly("t1", &EpisodeWindow::t1)
      .def_readonly("start_period", &EpisodeWindow::start_period)
      .def_readonly("end_period", &EpisodeWindow::end_period)
      .def_readonly("growth", &EpisodeWindow::growth)
      .def_property_readonly("width", &EpisodeWindow::width)
      .def("__repr__", [](const EpisodeWindow& w) {
        return "EpisodeWindow(" + std::to_string(w.start_period) + "-" +
               std::to_string(w.end_period) + ")";
      });

  m.def("detect_windows",
        py::overload_cast<const NormalizedSeries&, const WindowConfig&>(
            &detect_windows),
        py::arg("series"), py::arg("config") = WindowConfig{});
  m.def("detect_windows_in_range",
        py::overload_cast<const NormalizedSeries&, const WindowConfig&, int,
                          int>(&detect_windows),
        py::arg("series"), py::arg("config"), py::arg("lo"), py::arg("hi"));
  m.def("pre_window_baseline", &pre_window_baseline, py::arg("series"),
        py::arg("window"), py::arg("lookback") = 5);

  // -------------------------------------------------------- diagnostics
  py::class_<Layer1>(m, "Layer1")
      .def_readonly("alpha2_norm", &Layer1::alpha2_norm)
      .def_readonly("convexity_persistence", &Layer1::convexity_persistence)
      .def_readonly("mean_growth", &Layer1::mean_growth);
  py::class_<Layer2>(m, "Layer2")
      .def_readonly("growth_trend_norm", &Layer2::growth_trend_norm)
      .def_readonly("growth_sign_persistence", &Layer2::growth_sign_persistence)
      .def_readonly("growth_ratio", &Layer2::growth_ratio);
  py::class_<Layer3>(m, "Layer3")
      .def_readonly("nc_mean", &Layer3::nc_mean)
      .def_readonly("nc_positivity", &Layer3::nc_positivity)
      .def_readonly("nc_trend_norm", &Layer3::nc_trend_norm);
  py::class_<Layer4>(m, "Layer4")
      .def_readonly("log_linearity", &Layer4::log_linearity)
      .def_readonly("lgs", &Layer4::lgs)
      .def_readonly("log_growth_trend", &Layer4::log_growth_trend);

  py::class_<DiagnosticSet>(m, "DiagnosticSet")
      .def_readonly("layer1", &DiagnosticSet::layer1)
      .def_readonly("layer2", &DiagnosticSet::layer2)
      .def_readonly("layer3", &DiagnosticSet::layer3)
      .def_readonly("layer4", &DiagnosticSet::layer4)
      .def_readonly("log_ok", &DiagnosticSet::log_ok)
      .def_readonly("implied_rho", &DiagnosticSet::implied_rho)
      .def("as_dict", [](const DiagnosticSet& d) {
        py::dict out;
        const auto values = d.as_array();
        for (std::size_t i = 0; i < values.size(); ++i) {
          out[kStatNames[i]] =
              values[i] ? py::cast(*values[i]) : py::none().cast<py::object>();
        }
        return out;
      });

  m.def("compute_diagnostics", &compute_diagnostics, py::arg("series"),
        py::arg("window"), py::arg("baseline") = std::nullopt);
  m.attr("STAT_NAMES") = std::vector<std::string>(kStatNames.begin(),
                                                  kStatNames.end());

  // ----------------------------------------------------------- classify
  py::class_<GateConfig>(m, "GateConfig")
      .def(py::init<>())
      .def_readwrite("nc_min", &GateConfig::nc_min)
      .def_readwrite("ncp_min", &GateConfig::ncp_min)
      .def_readwrite("lgs_min", &GateConfig::lgs_min);
  m.def("strict_gate", &strict_gate);
  m.def("empirical_gate", &empirical_gate);

  py::class_<GateResult>(m, "GateResult")
      .def_readonly("nc_ok", &GateResult::nc_ok)
      .def_readonly("ncp_ok", &GateResult::ncp_ok)
      .def_readonly("lgs_ok", &GateResult::lgs_ok)
      .def_readonly("passed", &GateResult::passed)
      .def("failed_conditions", &GateResult::failed_conditions);
  m.def("apply_gate", &apply_gate, py::arg("diagnostics"), py::arg("gate"));

  py::enum_<EpisodeClass>(m, "EpisodeClass")
      .value("NONE", EpisodeClass::None)
      .value("MILD", EpisodeClass::Mild)
      .value("MODERATE", EpisodeClass::Moderate)
      .value("STRONG", EpisodeClass::Strong);
  m.def("class_of_score", &class_of_score, py::arg("score"));

  py::enum_<DgpKind>(m, "DgpKind")
      .value("AR1", DgpKind::Ar1)
      .value("I2", DgpKind::I2);

  py::class_<CalibrationMeta>(m, "CalibrationMeta")
      .def_readonly("kind", &CalibrationMeta::kind)
      .def_readonly("rho", &CalibrationMeta::rho)
      .def_readonly("sigma", &CalibrationMeta::sigma)
      .def_readonly("T", &CalibrationMeta::T)
      .def_readonly("n", &CalibrationMeta::n)
      .def_readonly("seed", &CalibrationMeta::seed);

  py::class_<ThresholdVector>(m, "ThresholdVector")
      .def_readonly("values", &ThresholdVector::values)
      .def_readonly("meta", &ThresholdVector::meta);

  py::class_<EpisodeVerdict>(m, "EpisodeVerdict")
      .def_readonly("gate", &EpisodeVerdict::gate)
      .def_readonly("layer_fractions", &EpisodeVerdict::layer_fractions)
      .def_readonly("score", &EpisodeVerdict::score)
      .def_property_readonly(
          "episode_class",
          [](const EpisodeVerdict& v) { return v.cls; })
      .def_readonly("notes", &EpisodeVerdict::notes);

  m.def("score_episode", &score_episode, py::arg("diagnostics"),
        py::arg("thresholds"), py::arg("gate"));
  m.def("calibrate", &calibrate, py::arg("regime"), py::arg("T"),
        py::arg("n") = 500, py::arg("seed") = 42,
        py::arg("window_config") = WindowConfig{});
  m.def("thresholds_to_text", &thresholds_to_text);
  m.def("thresholds_from_text", &thresholds_from_text);
  m.def("write_thresholds", &write_thresholds);
  m.def("read_thresholds", &read_thresholds);

  // ----------------------------------------------------------- pipeline
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("window", &PipelineConfig::window)
      .def_readwrite("gate", &PipelineConfig::gate)
      .def_readwrite("baseline_lookback", &PipelineConfig::baseline_lookback);

  py::class_<EpisodeAnalysis>(m, "EpisodeAnalysis")
      .def_readonly("window", &EpisodeAnalysis::window)
      .def_readonly("baseline", &EpisodeAnalysis::baseline)
      .def_readonly("diagnostics", &EpisodeAnalysis::diag)
      .def_readonly("gate", &EpisodeAnalysis::gate)
      .def_readonly("verdict", &EpisodeAnalysis::verdict);

  m.def("analyze_series",
        py::overload_cast<const NormalizedSeries&, const PipelineConfig&,
                          const ThresholdVector&, int, int>(&analyze_series),
        py::arg("series"), py::arg("config"), py::arg("thresholds"),
        py::arg("detect_lo") = -1, py::arg("detect_hi") = -1);
  m.def("analyze_raw_series",
        py::overload_cast<const RawSeries&, const PipelineConfig&,
                          const ThresholdVector&>(&analyze_series),
        py::arg("series"), py::arg("config"), py::arg("thresholds"));

  // -------------------------------------------------------- coexplosion
  py::enum_<PairClass>(m, "PairClass")
      .value("NOT_CO_EXPLOSIVE", PairClass::NotCoExplosive)
      .value("BORDERLINE", PairClass::Borderline)
      .value("CO_EXPLOSIVE", PairClass::CoExplosive);

  py::class_<EpisodePair>(m, "EpisodePair")
      .def_readonly("idx1", &EpisodePair::idx1)
      .def_readonly("idx2", &EpisodePair::idx2)
      .def_readonly("overlap", &EpisodePair::overlap);

  py::class_<Concordance>(m, "Concordance")
      .def_readonly("spearman", &Concordance::spearman)
      .def_readonly("kendall", &Concordance::kendall)
      .def_readonly("sign_concordance", &Concordance::sign_concordance);

  py::class_<PairCriteria>(m, "PairCriteria")
      .def(py::init<>())
      .def_readwrite("jaccard_min", &PairCriteria::jaccard_min)
      .def_readwrite("spearman_min", &PairCriteria::spearman_min)
      .def_readwrite("sign_concordance_min",
                     &PairCriteria::sign_concordance_min);

  py::class_<CoExplosionReport>(m, "CoExplosionReport")
      .def_readonly("episodes_1", &CoExplosionReport::episodes_1)
      .def_readonly("episodes_2", &CoExplosionReport::episodes_2)
      .def_readonly("pairs", &CoExplosionReport::pairs)
      .def_readonly("jaccard", &CoExplosionReport::jaccard)
      .def_readonly("concordance", &CoExplosionReport::concordance)
      .def_readonly("classification", &CoExplosionReport::classification);

  m.def("match_episodes", &match_episodes, py::arg("windows1"),
        py::arg("windows2"));
  m.def("concordance_stats", &concordance_stats, py::arg("scores1"),
        py::arg("scores2"));
  m.def("analyze_pair", &analyze_pair, py::arg("series1"), py::arg("series2"),
        py::arg("config"), py::arg("thresholds"),
        py::arg("criteria") = PairCriteria{});

  // ------------------------------------------------------------ simulate
  py::class_<DgpSpec>(m, "DgpSpec")
      .def(py::init<>())
      .def_readwrite("kind", &DgpSpec::kind)
      .def_readwrite("rho", &DgpSpec::rho)
      .def_readwrite("sigma", &DgpSpec::sigma)
      .def_readwrite("T", &DgpSpec::T)
      .def_readwrite("burn_in", &DgpSpec::burn_in)
      .def_readwrite("y_init", &DgpSpec::y_init);

  py::enum_<ScenarioKind>(m, "ScenarioKind")
      .value("STRONG_CO", ScenarioKind::StrongCo)
      .value("MILD_CO", ScenarioKind::MildCo)
      .value("INDEPENDENT_HALVES", ScenarioKind::IndependentHalves)
      .value("SPURIOUS_I2", ScenarioKind::SpuriousI2);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def_readwrite("kind", &ScenarioSpec::kind)
      .def_readwrite("rho1", &ScenarioSpec::rho1)
      .def_readwrite("rho2", &ScenarioSpec::rho2)
      .def_readwrite("innovation_corr", &ScenarioSpec::innovation_corr)
      .def_readwrite("base", &ScenarioSpec::base)
      .def_readwrite("half_mask", &ScenarioSpec::half_mask);
  m.def("make_scenario", &make_scenario, py::arg("kind"));

  m.def("gen_ar1", &gen_ar1, py::arg("spec"), py::arg("rho"), py::arg("seed"));
  m.def("gen_i2", &gen_i2, py::arg("spec"), py::arg("seed"));
  m.def("generate", &generate, py::arg("spec"), py::arg("seed"));
  m.def("gen_pair", &gen_pair, py::arg("scenario"), py::arg("seed"));
  m.def("mix_seed", &mix_seed, py::arg("base"), py::arg("stream"),
        py::arg("index"));

  // --------------------------------------------------------------- study
  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("n", &StudyConfig::n)
      .def_readwrite("seed", &StudyConfig::seed)
      .def_readwrite("window", &StudyConfig::window)
      .def_readwrite("pair_criteria", &StudyConfig::pair_criteria)
      .def_readwrite("baseline_lookback", &StudyConfig::baseline_lookback)
      .def_readwrite("calib_regime", &StudyConfig::calib_regime)
      .def_readwrite("calib_n", &StudyConfig::calib_n);

  py::class_<RegimeRow>(m, "RegimeRow")
      .def_readonly("regime", &RegimeRow::regime)
      .def_readonly("gate", &RegimeRow::gate)
      .def_readonly("mean_windows", &RegimeRow::mean_windows)
      .def_readonly("pct_none", &RegimeRow::pct_none)
      .def_readonly("gate_all", &RegimeRow::gate_all)
      .def_readonly("gate_nc", &RegimeRow::gate_nc)
      .def_readonly("gate_ncp", &RegimeRow::gate_ncp)
      .def_readonly("gate_lgs", &RegimeRow::gate_lgs)
      .def_readonly("nc_mean_pooled", &RegimeRow::nc_mean_pooled)
      .def_readonly("lgs_mean_pooled", &RegimeRow::lgs_mean_pooled)
      .def_readonly("pct_mild_plus", &RegimeRow::pct_mild_plus)
      .def_readonly("pct_any_positive_score",
                    &RegimeRow::pct_any_positive_score);

  py::class_<ScenarioRow>(m, "ScenarioRow")
      .def_readonly("scenario", &ScenarioRow::scenario)
      .def_readonly("gate", &ScenarioRow::gate)
      .def_readonly("j_mean", &ScenarioRow::j_mean)
      .def_readonly("pct_j_ge_067", &ScenarioRow::pct_j_ge_067)
      .def_readonly("rho_s_mean", &ScenarioRow::rho_s_mean)
      .def_readonly("n_rho_s_defined", &ScenarioRow::n_rho_s_defined)
      .def_readonly("pct_classified", &ScenarioRow::pct_classified)
      .def_readonly("pct_borderline", &ScenarioRow::pct_borderline);

  py::class_<ReplicationTable>(m, "ReplicationTable")
      .def_readonly("regimes", &ReplicationTable::regimes)
      .def_readonly("scenarios", &ReplicationTable::scenarios)
      .def_readonly("thresholds", &ReplicationTable::thresholds)
      .def_readonly("n", &ReplicationTable::n)
      .def_readonly("seed", &ReplicationTable::seed)
      .def_readonly("config_hash", &ReplicationTable::config_hash);

  m.def("default_regimes", &default_regimes);
  m.def("default_scenarios", &default_scenarios);
  m.def(
      "run_study",
      [](const std::vector<std::pair<std::string, DgpSpec>>& regimes,
         const std::vector<ScenarioSpec>& scenarios, const StudyConfig& cfg,
         const std::optional<ThresholdVector>& thresholds) {
        return run_study(regimes, scenarios, cfg,
                         thresholds ? &*thresholds : nullptr);
      },
      py::arg("regimes"), py::arg("scenarios"), py::arg("config"),
      py::arg("thresholds") = std::nullopt);
  m.def("regimes_to_csv", &regimes_to_csv);
  m.def("scenarios_to_csv", &scenarios_to_csv);
  m.def("study_to_json", &study_to_json);

  // ------------------------------------------------------------------ io
  m.def("read_csv", &read_csv, py::arg("path"));
  m.def("parse_csv", &parse_csv, py::arg("text"),
        py::arg("origin") = "<string>");
  m.def(
      "report_csv",
      [](const std::vector<std::pair<std::string, std::vector<EpisodeAnalysis>>>&
             per_series) { return report_to_csv(make_report(per_series)); },
      py::arg("per_series"));
  m.def(
      "report_json",
      [](const std::vector<std::pair<std::string, std::vector<EpisodeAnalysis>>>&
             per_series) { return report_to_json(make_report(per_series)); },
      py::arg("per_series"));
  m.def("plot_data_csv", &plot_data_csv, py::arg("series"),
        py::arg("episodes"));
}
