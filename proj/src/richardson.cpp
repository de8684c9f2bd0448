#include "bidisk/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

bool finite(cd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

RichardsonEstimate extrapolate(std::span<const cd> window, double ratio) {
  const std::size_t n = window.size();
  std::vector<cd> row(window.begin(), window.end());
  // In-place table: after pass j, row[i] = T[i][j] for i >= j.
  cd previous_diag = row[0];
  cd diag = row[0];
  double factor = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    factor *= ratio;
    for (std::size_t i = n - 1; i >= j; --i) {
      row[i] = row[i] + (row[i] - row[i - 1]) / (factor - 1.0);
    }
    previous_diag = diag;
    diag = row[j];
  }
  const double difference = std::abs(diag - previous_diag);
  return {diag, difference, 0.0, difference, 0};
}

}  // namespace

double richardson_noise_gain(double ratio, int levels) {
  double gain = 1.0;
  double factor = 1.0;
  for (int j = 1; j < levels; ++j) {
    factor *= ratio;
    gain *= (factor + 1.0) / (factor - 1.0);
  }
  return gain;
}

std::optional<RichardsonEstimate> richardson_best_window(std::span<const cd> samples, double ratio,
                                                         int levels, std::span<const double> noise) {
  if (levels < 2) throw ConfigError("Richardson extrapolation needs at least 2 levels");
  if (!(ratio > 1.0)) throw ConfigError("Richardson ratio must exceed 1");
  if (!noise.empty() && noise.size() != samples.size()) {
    throw ConfigError("Richardson noise estimates must match the samples");
  }
  const double gain = richardson_noise_gain(ratio, levels);
  const auto width = static_cast<std::size_t>(levels);
  std::optional<RichardsonEstimate> best;
  std::size_t run = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    run = finite(samples[k]) ? run + 1 : 0;
    if (run < width) continue;
    const std::size_t first = k + 1 - width;
    RichardsonEstimate est = extrapolate(samples.subspan(first, width), ratio);
    est.first = first;
    for (std::size_t i = first; i < first + width && !noise.empty(); ++i) {
      est.rounding_floor = std::max(est.rounding_floor, gain * noise[i]);
    }
    est.error = std::max(est.difference, est.rounding_floor);
    if (!finite(est.value) || !std::isfinite(est.error)) continue;
    if (!best || est.error < best->error) best = est;
  }
  return best;
}

}  // namespace bidisk
