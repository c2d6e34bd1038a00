#pragma once

#include <cstdint>
#include <utility>

#include "pathexp/series.hpp"

namespace pathexp {

// Deterministic generator with an explicit algorithm (xoshiro256++ seeded by
// splitmix64, Box-Muller normals) so identical seeds give identical series
// on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

 private:
  std::uint64_t s_[4];
};

// Order-independent per-replication seed derivation.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream,
                       std::uint64_t index);

enum class DgpKind { Ar1, I2 };

struct DgpSpec {
  DgpKind kind = DgpKind::Ar1;
  double rho = 1.0;       // AR(1) root; ignored for I2
  double sigma = 0.10;    // innovation sd
  int T = 80;             // post-burn-in length
  int burn_in = 50;
  double y_init = 1.0;    // AR(1) starting level; I2 starts at level 0
};

void validate(const DgpSpec& spec);

// y_t = rho y_{t-1} + eps_t, eps ~ N(0, sigma^2); burn_in + T values are
// generated from y_init and the first burn_in discarded.
RawSeries gen_ar1(const DgpSpec& spec, double rho, std::uint64_t seed);

// Double cumulative sum of N(0, sigma^2) innovations from zero level and
// slope (so d2 y_t = eps_t), burn_in discarded.
RawSeries gen_i2(const DgpSpec& spec, std::uint64_t seed);

// Dispatch on spec.kind.
RawSeries generate(const DgpSpec& spec, std::uint64_t seed);

enum class ScenarioKind { StrongCo, MildCo, IndependentHalves, SpuriousI2 };

const char* to_string(ScenarioKind k);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::StrongCo;
  double rho1 = 1.10;
  double rho2 = 1.10;
  double innovation_corr = 0.0;  // r in (-1, 1)
  DgpSpec base;                  // sigma / T / burn_in / y_init
  // IndependentHalves restricts detection for series 1 to the first half of
  // the sample and series 2 to the second half.
  bool half_mask = false;
};

ScenarioSpec make_scenario(ScenarioKind kind);

// Correlated innovations via the Cholesky factor of [[1, r], [r, 1]]:
// eps1 = sigma z1, eps2 = sigma (r z1 + sqrt(1 - r^2) z2).
std::pair<RawSeries, RawSeries> gen_pair(const ScenarioSpec& scenario,
                                         std::uint64_t seed);

}  // namespace pathexp
