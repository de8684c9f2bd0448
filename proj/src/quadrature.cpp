#include "bidisk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bidisk/errors.hpp"

namespace bidisk {

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw ConfigError("quadrature order must be positive");
  const auto n = static_cast<std::size_t>(order);
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  for (std::size_t i = 1; i < n; ++i) max_spacing_ = std::max(max_spacing_, nodes_[i] - nodes_[i - 1]);
  if (n == 1) max_spacing_ = 2.0;
}

double distance_to_unit_segment(cd p) {
  const double x = std::clamp(p.real(), -1.0, 1.0);
  return std::abs(p - cd(x, 0.0));
}

cd cauchy_log(cd p) {
  if (distance_to_unit_segment(p) == 0.0) throw DomainError("Cauchy kernel pole on [-1, 1]");
  return std::log((p - 1.0) / (p + 1.0));
}

cd integrate_poly_reciprocal_linear(std::span<const double> coeffs, cd c0, cd c1,
                                    const GaussLegendreRule& rule) {
  auto poly = [&](double t) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
    return v;
  };
  if (coeffs.empty()) return 0.0;
  if (c1 == cd(0.0)) return rule.integrate(poly) / c0;
  const cd pole = -c0 / c1;
  const double dist = distance_to_unit_segment(pole);
  if (dist == 0.0) throw DomainError("integrand denominator vanishes on [-1, 1]");
  if (dist >= 10.0 * rule.max_spacing()) {
    return rule.integrate([&](double t) { return cd(poly(t)) / (c0 + c1 * t); });
  }
  // Horner division: P(t) = Q(t) (t - pole) + P(pole).
  const std::size_t n = coeffs.size();
  cd carry = coeffs[n - 1];
  cd quotient_integral = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) {
    // carry is the coefficient of t^k in Q
    if (k % 2 == 0) quotient_integral += carry * (2.0 / static_cast<double>(k + 1));
    carry = coeffs[k] + carry * pole;
  }
  return (quotient_integral + carry * cauchy_log(pole)) / c1;
}

}  // namespace bidisk
