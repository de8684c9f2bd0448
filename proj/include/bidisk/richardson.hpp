#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>

namespace bidisk {

using cd = std::complex<double>;

struct RichardsonEstimate {
  cd value;
  /// |level L estimate - level L-1 estimate| of the chosen window.
  double difference = 0.0;
  /// Sample noise of the window amplified by the extrapolation (0 without noise).
  double rounding_floor = 0.0;
  /// max(difference, rounding_floor).
  double error = 0.0;
  /// Index of the first sample of the chosen window.
  std::size_t first = 0;
};

/// Extrapolates samples of F(t_k) to t -> 0, where t_k / t_{k+1} = ratio and
/// F(t) = F(0) + c1 t + c2 t^2 + ...
///
/// Every window of `levels` consecutive finite samples is extrapolated with a
/// Neville table; the window with the smallest error wins (ties go to the
/// earlier window). Returns nullopt when fewer than
/// `levels` consecutive finite samples exist.
///
/// `noise`, when given, bounds the rounding error of each sample. A window's
/// error is then at least the amplified noise of its samples, so windows of
/// rounding-quantized (and hence spuriously identical) samples cannot win.
std::optional<RichardsonEstimate> richardson_best_window(std::span<const cd> samples, double ratio,
                                                         int levels, std::span<const double> noise = {});

/// Bound on how much the extrapolation amplifies independent sample errors:
/// prod_j (ratio^j + 1) / (ratio^j - 1).
double richardson_noise_gain(double ratio, int levels);

}  // namespace bidisk
