#include "pathexp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pathexp/errors.hpp"
#include "pathexp/stats.hpp"
#include "pathexp/window.hpp"

namespace pathexp {

namespace {

// Inclusive comparisons with a hair of absolute slack so values sitting
// exactly on a boundary cannot fail from accumulated rounding.
constexpr double kBoundarySlack = 1e-12;

bool meets(double value, double threshold) {
  return value >= threshold - kBoundarySlack;
}

const char* kGateNames[3] = {"NC", "NCP", "LGS"};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> GateResult::failed_conditions() const {
  std::vector<std::string> out;
  if (!nc_ok) out.push_back(kGateNames[0]);
  if (!ncp_ok) out.push_back(kGateNames[1]);
  if (!lgs_ok) out.push_back(kGateNames[2]);
  return out;
}

GateResult apply_gate(const DiagnosticSet& d, const GateConfig& g) {
  GateResult r;
  r.nc_ok = meets(d.layer3.nc_mean, g.nc_min);
  r.ncp_ok = meets(d.layer3.nc_positivity, g.ncp_min);
  r.lgs_ok = meets(d.layer4.lgs, g.lgs_min);
  r.passed = r.nc_ok && r.ncp_ok && r.lgs_ok;
  return r;
}

const char* to_string(EpisodeClass c) {
  switch (c) {
    case EpisodeClass::None: return "None";
    case EpisodeClass::Mild: return "Mild";
    case EpisodeClass::Moderate: return "Moderate";
    case EpisodeClass::Strong: return "Strong";
  }
  return "None";
}

EpisodeClass class_of_score(double score) {
  if (score >= 0.75) return EpisodeClass::Strong;
  if (score >= 0.57) return EpisodeClass::Moderate;
  if (score >= 0.36) return EpisodeClass::Mild;
  return EpisodeClass::None;
}

EpisodeVerdict score_episode(const DiagnosticSet& d, const ThresholdVector& t,
                             const GateResult& gate) {
  EpisodeVerdict v;
  v.gate = gate;
  if (!gate.passed) {
    // Gate short-circuit: no intensity scoring for failed episodes.
    v.score = 0.0;
    v.cls = EpisodeClass::None;
    return v;
  }

  const auto stats = d.as_array();
  int present[4] = {0, 0, 0, 0};
  int exceeding[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (!stats[i].has_value()) continue;
    const int layer = kStatLayer[i];
    ++present[layer];
    // Exceedance is strict. Calibration routinely puts the bounded
    // statistics' thresholds at exactly 1.0, and a window merely matching
    // such a saturated threshold carries no intensity evidence.
    if (*stats[i] > t.values[i]) ++exceeding[layer];
  }
  for (int j = 0; j < 4; ++j) {
    if (present[j] == 0) {
      v.layer_fractions[j] = 0.0;
      v.notes.push_back("layer " + std::to_string(j + 1) +
                        ": no statistic present");
      continue;
    }
    v.layer_fractions[j] =
        static_cast<double>(exceeding[j]) / static_cast<double>(present[j]);
  }
  v.score = (v.layer_fractions[0] + 1.5 * v.layer_fractions[1] +
             3.0 * v.layer_fractions[2] + 1.5 * v.layer_fractions[3]) /
            7.0;
  v.cls = class_of_score(v.score);
  return v;
}

ThresholdVector calibrate(const DgpSpec& regime, int T, int n,
                          std::uint64_t seed, const WindowConfig& wc) {
  if (n < 2) throw BadConfigError("calibrate needs n >= 2 replications");
  DgpSpec spec = regime;
  spec.T = T;
  validate(spec);
  if (T < wc.w_min + wc.open_run + 2) {
    throw BadConfigError("calibrate: T too small for window detection");
  }

  std::array<std::vector<double>, 12> pools;
  long long total_windows = 0;
  for (int rep = 0; rep < n; ++rep) {
    const RawSeries raw = generate(spec, mix_seed(seed, 0, static_cast<std::uint64_t>(rep)));
    const NormalizedSeries norm = normalize(raw);
    const std::vector<EpisodeWindow> windows = detect_windows(norm, wc);
    for (const EpisodeWindow& w : windows) {
      ++total_windows;
      const DiagnosticSet diag =
          compute_diagnostics(norm, w, pre_window_baseline(norm, w));
      const auto stats = diag.as_array();
      for (std::size_t i = 0; i < stats.size(); ++i) {
        if (stats[i].has_value()) pools[i].push_back(*stats[i]);
      }
    }
  }
  if (total_windows == 0) {
    throw CalibrationError(
        "calibration regime produced no windows; check the DGP and window "
        "configuration");
  }

  ThresholdVector out;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pools[i].empty()) {
      throw CalibrationError(std::string("calibration pooled no values for ") +
                             kStatNames[i]);
    }
    std::sort(pools[i].begin(), pools[i].end());
    // Thresholds are floored at the explosive-neutral origin: every
    // statistic is oriented greater-is-more-explosive, and a negative bar
    // (possible for the trend statistics, whose calibration pools straddle
    // zero) would count evidence of decline as intensity.
    out.values[i] = std::max(0.0, quantile(pools[i], 0.75));
  }
  out.meta.kind = spec.kind;
  out.meta.rho = spec.rho;
  out.meta.sigma = spec.sigma;
  out.meta.T = T;
  out.meta.n = n;
  out.meta.seed = seed;
  return out;
}

std::string thresholds_to_text(const ThresholdVector& t) {
  std::ostringstream os;
  os << "pathexp_thresholds v1\n";
  os << "meta.kind " << (t.meta.kind == DgpKind::Ar1 ? "ar1" : "i2") << "\n";
  os << "meta.rho " << format_double(t.meta.rho) << "\n";
  os << "meta.sigma " << format_double(t.meta.sigma) << "\n";
  os << "meta.T " << t.meta.T << "\n";
  os << "meta.n " << t.meta.n << "\n";
  os << "meta.seed " << t.meta.seed << "\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    os << "stat." << kStatNames[i] << " " << format_double(t.values[i]) << "\n";
  }
  return os.str();
}

ThresholdVector thresholds_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "pathexp_thresholds v1") {
    throw IoError("threshold document: bad or missing header line");
  }
  ThresholdVector t;
  std::array<bool, 12> seen{};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value)) {
      throw IoError("threshold document: malformed line '" + line + "'");
    }
    if (key == "meta.kind") {
      if (value == "ar1") {
        t.meta.kind = DgpKind::Ar1;
      } else if (value == "i2") {
        t.meta.kind = DgpKind::I2;
      } else {
        throw IoError("threshold document: unknown DGP kind '" + value + "'");
      }
    } else if (key == "meta.rho") {
      t.meta.rho = std::stod(value);
    } else if (key == "meta.sigma") {
      t.meta.sigma = std::stod(value);
    } else if (key == "meta.T") {
      t.meta.T = std::stoi(value);
    } else if (key == "meta.n") {
      t.meta.n = std::stoi(value);
    } else if (key == "meta.seed") {
      t.meta.seed = std::stoull(value);
    } else if (key.rfind("stat.", 0) == 0) {
      const std::string name = key.substr(5);
      bool matched = false;
      for (std::size_t i = 0; i < kStatNames.size(); ++i) {
        if (name == kStatNames[i]) {
          t.values[i] = std::stod(value);
          seen[i] = true;
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw IoError("threshold document: unknown statistic '" + name + "'");
      }
    } else {
      throw IoError("threshold document: unknown key '" + key + "'");
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw IoError(std::string("threshold document: missing statistic ") +
                    kStatNames[i]);
    }
    if (!std::isfinite(t.values[i])) {
      throw IoError(std::string("threshold document: non-finite threshold ") +
                    kStatNames[i]);
    }
  }
  return t;
}

void write_thresholds(const ThresholdVector& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << thresholds_to_text(t);
  if (!os.good()) throw IoError("failed writing '" + path + "'");
}

ThresholdVector read_thresholds(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return thresholds_from_text(buf.str());
}

}  // namespace pathexp
