#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bidisk {

using cd = std::complex<double>;

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);

  [[nodiscard]] int order() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }

  /// Largest gap between consecutive nodes (attained mid-interval).
  [[nodiscard]] double max_spacing() const { return max_spacing_; }

  template <class F>
  auto integrate(F&& f) const -> decltype(f(0.0)) {
    decltype(f(0.0)) sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double max_spacing_ = 0.0;
};

/// Distance from p to the segment [-1, 1].
double distance_to_unit_segment(cd p);

/// Integral over [-1, 1] of P(t) / (c0 + c1 t) for P = sum_k coeffs[k] t^k, assuming
/// the denominator does not vanish on the segment. Uses the fixed rule when the pole
/// -c0/c1 is at least 10 node spacings away from the segment; nearer, P is
/// divided by (t - pole) exactly: the quotient is integrated in closed form and
/// the remainder contributes the logarithmic term.
cd integrate_poly_reciprocal_linear(std::span<const double> coeffs, cd c0, cd c1,
                                    const GaussLegendreRule& rule);

/// Integral over [-1, 1] of dt / (t - p) = Log((p - 1) / (p + 1)) for p off the segment.
cd cauchy_log(cd p);

}  // namespace bidisk
