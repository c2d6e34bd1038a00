#include "pathexp/series.hpp"

#include <cmath>

#include "pathexp/errors.hpp"

namespace pathexp {

void validate(const RawSeries& s) {
  if (s.values.empty()) {
    throw EmptyInputError("series '" + s.label + "' is empty");
  }
  if (s.periods.size() != s.values.size()) {
    throw BadConfigError("series '" + s.label +
                         "': periods and values differ in length");
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) {
      throw NonFiniteError("series '" + s.label + "' has a non-finite value");
    }
  }
  for (std::size_t i = 1; i < s.periods.size(); ++i) {
    if (s.periods[i] != s.periods[i - 1] + 1) {
      throw NonMonotonePeriodsError(
          "series '" + s.label + "': periods must increase by 1 (at position " +
          std::to_string(i) + ")");
    }
  }
}

NormalizedSeries normalize(const RawSeries& s) {
  validate(s);
  if (s.values.front() == 0.0) {
    throw ZeroOriginError("series '" + s.label +
                          "': first value is zero, cannot index-normalise");
  }
  NormalizedSeries out;
  out.label = s.label;
  out.periods = s.periods;
  out.origin_value = s.values.front();
  out.values.resize(s.values.size());
  const double origin = s.values.front();
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out.values[i] = s.values[i] / origin;
  }
  out.values[0] = 1.0;  // invariant: values[0] == 1 exactly
  return out;
}

std::vector<double> second_diff(std::span<const double> v) {
  if (v.size() < 3) {
    throw TooShortError("second_diff needs at least 3 observations, got " +
                        std::to_string(v.size()));
  }
  std::vector<double> out(v.size() - 2);
  for (std::size_t t = 2; t < v.size(); ++t) {
    out[t - 2] = v[t] - 2.0 * v[t - 1] + v[t - 2];
  }
  return out;
}

}  // namespace pathexp
