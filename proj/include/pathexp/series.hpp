#pragma once

#include <span>
#include <string>
#include <vector>

namespace pathexp {

// A raw input series on an integer clock with unit spacing (typically years).
struct RawSeries {
  std::string label;
  std::vector<int> periods;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Index-normalised series: values[t] = raw[t] / raw[0], so values[0] == 1.
// Every statistic downstream operates on this representation, which makes
// the whole pipeline invariant to positive rescaling of the input.
struct NormalizedSeries {
  std::string label;
  std::vector<int> periods;
  std::vector<double> values;
  double origin_value = 0.0;

  std::size_t size() const { return values.size(); }
};

// Throws if the series violates its invariants (length >= 1, finite values,
// strictly increasing unit-spaced periods, matching lengths).
void validate(const RawSeries& s);

NormalizedSeries normalize(const RawSeries& s);

// out[k] = v[k+2] - 2 v[k+1] + v[k]; out[k] is the second difference of the
// series at index k+2. Output length is input length - 2.
std::vector<double> second_diff(std::span<const double> v);

}  // namespace pathexp
