#include "pathexp/simulate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pathexp/errors.hpp"

namespace pathexp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller; u1 is shifted into (0, 1] so the log never sees zero.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream,
                       std::uint64_t index) {
  std::uint64_t sm = base;
  std::uint64_t h = splitmix64(sm);
  sm = h ^ (stream * 0xD1B54A32D192ED03ULL + 1);
  h = splitmix64(sm);
  sm = h ^ (index * 0x2545F4914F6CDD1DULL + 1);
  return splitmix64(sm);
}

void validate(const DgpSpec& spec) {
  if (!(spec.sigma > 0.0)) throw BadConfigError("DGP sigma must be > 0");
  if (spec.T < 10) throw BadConfigError("DGP T must be >= 10");
  if (spec.burn_in < 0) throw BadConfigError("DGP burn_in must be >= 0");
}

namespace {

std::string series_label(const std::string& kind, std::uint64_t seed) {
  return kind + "_seed" + std::to_string(seed);
}

RawSeries finish_series(std::string label, std::vector<double> values) {
  RawSeries out;
  out.label = std::move(label);
  out.values = std::move(values);
  out.periods.resize(out.values.size());
  for (std::size_t i = 0; i < out.periods.size(); ++i) {
    out.periods[i] = static_cast<int>(i) + 1;
  }
  return out;
}

}  // namespace

RawSeries gen_ar1(const DgpSpec& spec, double rho, std::uint64_t seed) {
  validate(spec);
  Rng rng(seed);
  const int total = spec.burn_in + spec.T;
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(spec.T));
  double y = spec.y_init;
  for (int t = 1; t <= total; ++t) {
    y = rho * y + spec.sigma * rng.normal();
    if (t > spec.burn_in) kept.push_back(y);
  }
  char label[48];
  std::snprintf(label, sizeof(label), "ar1_rho%.3f", rho);
  return finish_series(series_label(label, seed), std::move(kept));
}

RawSeries gen_i2(const DgpSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng rng(seed);
  const int total = spec.burn_in + spec.T;
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(spec.T));
  // Level starts at y_init with zero slope; the level origin is negligible
  // against the burn-in wander but keeps the noise-free limit a usable
  // constant series rather than identically zero.
  double level = spec.y_init;
  double slope = 0.0;
  for (int t = 1; t <= total; ++t) {
    slope += spec.sigma * rng.normal();
    level += slope;
    if (t > spec.burn_in) kept.push_back(level);
  }
  return finish_series(series_label("i2", seed), std::move(kept));
}

RawSeries generate(const DgpSpec& spec, std::uint64_t seed) {
  return spec.kind == DgpKind::Ar1 ? gen_ar1(spec, spec.rho, seed)
                                   : gen_i2(spec, seed);
}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::StrongCo: return "strong_co";
    case ScenarioKind::MildCo: return "mild_co";
    case ScenarioKind::IndependentHalves: return "independent_halves";
    case ScenarioKind::SpuriousI2: return "spurious_i2";
  }
  return "unknown";
}

ScenarioSpec make_scenario(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::StrongCo:
      s.rho1 = 1.10;
      s.rho2 = 1.10;
      s.innovation_corr = 0.80;
      break;
    case ScenarioKind::MildCo:
      s.rho1 = 1.10;
      s.rho2 = 1.04;
      s.innovation_corr = 0.80;
      break;
    case ScenarioKind::IndependentHalves:
      s.rho1 = 1.10;
      s.rho2 = 1.10;
      s.innovation_corr = 0.0;
      s.half_mask = true;
      break;
    case ScenarioKind::SpuriousI2:
      s.innovation_corr = 0.0;
      break;
  }
  return s;
}

std::pair<RawSeries, RawSeries> gen_pair(const ScenarioSpec& scenario,
                                         std::uint64_t seed) {
  validate(scenario.base);
  const double r = scenario.innovation_corr;
  if (!(r > -1.0 && r < 1.0)) {
    throw BadConfigError("innovation correlation must lie in (-1, 1)");
  }
  Rng rng(seed);
  const DgpSpec& base = scenario.base;
  const int total = base.burn_in + base.T;
  const double cross = std::sqrt(1.0 - r * r);
  const bool i2 = scenario.kind == ScenarioKind::SpuriousI2;

  std::vector<double> kept1, kept2;
  kept1.reserve(static_cast<std::size_t>(base.T));
  kept2.reserve(static_cast<std::size_t>(base.T));
  double y1 = base.y_init, y2 = base.y_init;
  double level1 = base.y_init, slope1 = 0.0;
  double level2 = base.y_init, slope2 = 0.0;
  for (int t = 1; t <= total; ++t) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double e1 = base.sigma * z1;
    const double e2 = base.sigma * (r * z1 + cross * z2);
    if (i2) {
      slope1 += e1;
      level1 += slope1;
      slope2 += e2;
      level2 += slope2;
      if (t > base.burn_in) {
        kept1.push_back(level1);
        kept2.push_back(level2);
      }
    } else {
      y1 = scenario.rho1 * y1 + e1;
      y2 = scenario.rho2 * y2 + e2;
      if (t > base.burn_in) {
        kept1.push_back(y1);
        kept2.push_back(y2);
      }
    }
  }
  const std::string stem = to_string(scenario.kind);
  return {finish_series(series_label(stem + "_a", seed), std::move(kept1)),
          finish_series(series_label(stem + "_b", seed), std::move(kept2))};
}

}  // namespace pathexp
