#include "pathexp/study.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pathexp/errors.hpp"
#include "pathexp/io.hpp"

namespace pathexp {

namespace {

// Seed streams: regimes at 1.., scenarios at 101.., calibration at 1000.
constexpr std::uint64_t kRegimeStream = 1;
constexpr std::uint64_t kScenarioStream = 101;
constexpr std::uint64_t kCalibStream = 1000;

struct GateTag {
  const char* name;
  GateConfig config;
};

std::array<GateTag, 2> gate_tags() {
  return {GateTag{"strict", strict_gate()},
          GateTag{"empirical", empirical_gate()}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string canonical_config_text(const StudyConfig& cfg) {
  std::ostringstream os;
  os << "n=" << cfg.n << ";seed=" << cfg.seed
     << ";open_run=" << cfg.window.open_run
     << ";close_run=" << cfg.window.close_run << ";w_min=" << cfg.window.w_min
     << ";w_max=" << cfg.window.w_max
     << ";min_growth=" << fmt(cfg.window.min_growth)
     << ";min_gap=" << cfg.window.min_gap
     << ";max_windows=" << cfg.window.max_windows
     << ";jaccard_min=" << fmt(cfg.pair_criteria.jaccard_min)
     << ";spearman_min=" << fmt(cfg.pair_criteria.spearman_min)
     << ";sc_min=" << fmt(cfg.pair_criteria.sign_concordance_min)
     << ";lookback=" << cfg.baseline_lookback
     << ";calib_rho=" << fmt(cfg.calib_regime.rho)
     << ";calib_sigma=" << fmt(cfg.calib_regime.sigma)
     << ";calib_T=" << cfg.calib_regime.T << ";calib_n=" << cfg.calib_n;
  return os.str();
}

struct RegimeAccum {
  long long windows = 0;
  long long none_reps = 0;
  long long pass_all = 0, pass_nc = 0, pass_ncp = 0, pass_lgs = 0;
  double nc_sum = 0.0, lgs_sum = 0.0;
  long long mild_plus_reps = 0;
  long long positive_score_reps = 0;
  long long cls[4] = {0, 0, 0, 0};
};

RegimeRow finish_regime_row(const std::string& regime, const char* gate,
                            const StudyConfig& cfg, const std::string& hash,
                            const RegimeAccum& a) {
  RegimeRow row;
  row.regime = regime;
  row.gate = gate;
  row.n = cfg.n;
  row.seed = cfg.seed;
  row.config_hash = hash;
  const double n = static_cast<double>(cfg.n);
  const double wins = static_cast<double>(a.windows);
  row.mean_windows = wins / n;
  row.pct_none = static_cast<double>(a.none_reps) / n;
  row.gate_all = a.windows ? static_cast<double>(a.pass_all) / wins : 0.0;
  row.gate_nc = a.windows ? static_cast<double>(a.pass_nc) / wins : 0.0;
  row.gate_ncp = a.windows ? static_cast<double>(a.pass_ncp) / wins : 0.0;
  row.gate_lgs = a.windows ? static_cast<double>(a.pass_lgs) / wins : 0.0;
  row.nc_mean_pooled = a.windows ? a.nc_sum / wins : 0.0;
  row.lgs_mean_pooled = a.windows ? a.lgs_sum / wins : 0.0;
  row.pct_mild_plus = static_cast<double>(a.mild_plus_reps) / n;
  row.pct_any_positive_score =
      static_cast<double>(a.positive_score_reps) / n;
  row.share_class_none = a.windows ? static_cast<double>(a.cls[0]) / wins : 0.0;
  row.share_class_mild = a.windows ? static_cast<double>(a.cls[1]) / wins : 0.0;
  row.share_class_moderate =
      a.windows ? static_cast<double>(a.cls[2]) / wins : 0.0;
  row.share_class_strong =
      a.windows ? static_cast<double>(a.cls[3]) / wins : 0.0;
  return row;
}

}  // namespace

std::vector<std::pair<std::string, DgpSpec>> default_regimes() {
  DgpSpec strong{DgpKind::Ar1, 1.10, 0.10, 80, 50, 1.0};
  DgpSpec mild{DgpKind::Ar1, 1.04, 0.10, 80, 50, 1.0};
  DgpSpec unit{DgpKind::Ar1, 1.00, 0.10, 80, 50, 1.0};
  DgpSpec i2{DgpKind::I2, 1.0, 0.10, 80, 50, 1.0};
  return {{"strong_explosive", strong},
          {"mild_explosive", mild},
          {"unit_root", unit},
          {"i2", i2}};
}

std::vector<ScenarioSpec> default_scenarios() {
  return {make_scenario(ScenarioKind::StrongCo),
          make_scenario(ScenarioKind::MildCo),
          make_scenario(ScenarioKind::IndependentHalves),
          make_scenario(ScenarioKind::SpuriousI2)};
}

ReplicationTable run_study(
    const std::vector<std::pair<std::string, DgpSpec>>& regimes,
    const std::vector<ScenarioSpec>& scenarios, const StudyConfig& cfg,
    const ThresholdVector* thresholds) {
  if (cfg.n < 1) throw BadConfigError("run_study needs n >= 1");
  validate(cfg.window);

  ReplicationTable table;
  table.n = cfg.n;
  table.seed = cfg.seed;
  table.config_hash = config_hash(canonical_config_text(cfg));

  if (thresholds != nullptr) {
    table.thresholds = *thresholds;
  } else {
    table.thresholds =
        calibrate(cfg.calib_regime, cfg.calib_regime.T, cfg.calib_n,
                  mix_seed(cfg.seed, kCalibStream, 0), cfg.window);
  }

  const auto gates = gate_tags();

  for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
    const auto& [label, spec] = regimes[ri];
    std::array<RegimeAccum, 2> accum;
    for (int rep = 0; rep < cfg.n; ++rep) {
      const std::uint64_t rep_seed =
          mix_seed(cfg.seed, kRegimeStream + ri, static_cast<std::uint64_t>(rep));
      try {
        const RawSeries raw = generate(spec, rep_seed);
        const NormalizedSeries norm = normalize(raw);
        const std::vector<EpisodeWindow> windows =
            detect_windows(norm, cfg.window);
        std::vector<DiagnosticSet> diags;
        diags.reserve(windows.size());
        for (const EpisodeWindow& w : windows) {
          diags.push_back(compute_diagnostics(
              norm, w, pre_window_baseline(norm, w, cfg.baseline_lookback)));
        }
        for (std::size_t gi = 0; gi < gates.size(); ++gi) {
          RegimeAccum& a = accum[gi];
          if (windows.empty()) ++a.none_reps;
          bool any_mild_plus = false;
          bool any_positive = false;
          for (const DiagnosticSet& diag : diags) {
            ++a.windows;
            const GateResult gate = apply_gate(diag, gates[gi].config);
            if (gate.nc_ok) ++a.pass_nc;
            if (gate.ncp_ok) ++a.pass_ncp;
            if (gate.lgs_ok) ++a.pass_lgs;
            if (gate.passed) ++a.pass_all;
            a.nc_sum += diag.layer3.nc_mean;
            a.lgs_sum += diag.layer4.lgs;
            const EpisodeVerdict v =
                score_episode(diag, table.thresholds, gate);
            ++a.cls[static_cast<int>(v.cls)];
            if (v.cls != EpisodeClass::None) any_mild_plus = true;
            if (v.score > 0.0) any_positive = true;
          }
          if (any_mild_plus) ++a.mild_plus_reps;
          if (any_positive) ++a.positive_score_reps;
        }
      } catch (const Error& e) {
        throw Error("regime '" + label + "' replication " +
                    std::to_string(rep) + ": " + e.what());
      }
    }
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      table.regimes.push_back(finish_regime_row(
          label, gates[gi].name, cfg, table.config_hash, accum[gi]));
    }
  }

  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    const ScenarioSpec& scenario = scenarios[si];
    struct ScenAccum {
      double j_sum = 0.0;
      long long j_ge = 0;
      double rho_sum = 0.0;
      int rho_defined = 0;
      long long classified = 0;
      long long borderline = 0;
    };
    std::array<ScenAccum, 2> accum;
    for (int rep = 0; rep < cfg.n; ++rep) {
      const std::uint64_t rep_seed = mix_seed(cfg.seed, kScenarioStream + si,
                                              static_cast<std::uint64_t>(rep));
      try {
        const auto [raw1, raw2] = gen_pair(scenario, rep_seed);
        const NormalizedSeries n1 = normalize(raw1);
        const NormalizedSeries n2 = normalize(raw2);
        const int T = static_cast<int>(n1.size());
        int lo1 = -1, hi1 = -1, lo2 = -1, hi2 = -1;
        if (scenario.half_mask) {
          lo1 = 0;
          hi1 = T / 2 - 1;
          lo2 = T / 2;
          hi2 = T - 1;
        }
        for (std::size_t gi = 0; gi < gates.size(); ++gi) {
          PipelineConfig pc;
          pc.window = cfg.window;
          pc.gate = gates[gi].config;
          pc.baseline_lookback = cfg.baseline_lookback;
          auto keep = [](std::vector<EpisodeAnalysis> v) {
            std::vector<EpisodeAnalysis> out;
            for (auto& e : v) {
              if (e.gate.passed) out.push_back(std::move(e));
            }
            return out;
          };
          CoExplosionReport report = classify_pair(
              keep(analyze_series(n1, pc, table.thresholds, lo1, hi1)),
              keep(analyze_series(n2, pc, table.thresholds, lo2, hi2)),
              cfg.pair_criteria);
          ScenAccum& a = accum[gi];
          a.j_sum += report.jaccard;
          if (report.jaccard >= cfg.pair_criteria.jaccard_min) ++a.j_ge;
          if (report.concordance.spearman.has_value()) {
            a.rho_sum += *report.concordance.spearman;
            ++a.rho_defined;
          }
          if (report.classification == PairClass::CoExplosive) ++a.classified;
          if (report.classification == PairClass::Borderline) ++a.borderline;
        }
      } catch (const Error& e) {
        throw Error("scenario '" + std::string(to_string(scenario.kind)) +
                    "' replication " + std::to_string(rep) + ": " + e.what());
      }
    }
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      const ScenAccum& a = accum[gi];
      ScenarioRow row;
      row.scenario = to_string(scenario.kind);
      row.gate = gates[gi].name;
      row.n = cfg.n;
      row.seed = cfg.seed;
      row.config_hash = table.config_hash;
      const double n = static_cast<double>(cfg.n);
      row.j_mean = a.j_sum / n;
      row.pct_j_ge_067 = static_cast<double>(a.j_ge) / n;
      row.rho_s_mean = a.rho_defined ? a.rho_sum / a.rho_defined : 0.0;
      row.n_rho_s_defined = a.rho_defined;
      row.pct_classified = static_cast<double>(a.classified) / n;
      row.pct_borderline = static_cast<double>(a.borderline) / n;
      table.scenarios.push_back(row);
    }
  }
  return table;
}

std::string regimes_to_csv(const ReplicationTable& t) {
  std::ostringstream os;
  os << "regime,gate,n,seed,config_hash,mean_windows,pct_none,gate_all,"
        "gate_nc,gate_ncp,gate_lgs,nc_mean_pooled,lgs_mean_pooled,"
        "pct_mild_plus,pct_any_positive_score,share_class_none,"
        "share_class_mild,share_class_moderate,share_class_strong\n";
  for (const RegimeRow& r : t.regimes) {
    os << r.regime << ',' << r.gate << ',' << r.n << ',' << r.seed << ','
       << r.config_hash << ',' << fmt(r.mean_windows) << ','
       << fmt(r.pct_none) << ',' << fmt(r.gate_all) << ',' << fmt(r.gate_nc)
       << ',' << fmt(r.gate_ncp) << ',' << fmt(r.gate_lgs) << ','
       << fmt(r.nc_mean_pooled) << ',' << fmt(r.lgs_mean_pooled) << ','
       << fmt(r.pct_mild_plus) << ',' << fmt(r.pct_any_positive_score) << ','
       << fmt(r.share_class_none) << ',' << fmt(r.share_class_mild) << ','
       << fmt(r.share_class_moderate) << ',' << fmt(r.share_class_strong)
       << '\n';
  }
  return os.str();
}

std::string scenarios_to_csv(const ReplicationTable& t) {
  std::ostringstream os;
  os << "scenario,gate,n,seed,config_hash,j_mean,pct_j_ge_067,rho_s_mean,"
        "n_rho_s_defined,pct_classified,pct_borderline\n";
  for (const ScenarioRow& r : t.scenarios) {
    os << r.scenario << ',' << r.gate << ',' << r.n << ',' << r.seed << ','
       << r.config_hash << ',' << fmt(r.j_mean) << ',' << fmt(r.pct_j_ge_067)
       << ',' << fmt(r.rho_s_mean) << ',' << r.n_rho_s_defined << ','
       << fmt(r.pct_classified) << ',' << fmt(r.pct_borderline) << '\n';
  }
  return os.str();
}

}  // namespace pathexp
