#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "bidisk/quadrature.hpp"

namespace bidisk {

using cd = std::complex<double>;

struct Atom {
  double t;  // location in [-1, 1]
  double w;  // weight > 0
};

/// Polynomial density sum_k coeffs[k] t^k on [-1, 1].
class Density {
 public:
  /// Throws ConfigError if the polynomial is negative somewhere on [-1, 1]
  /// (checked on a 2001-point grid) or has no coefficients.
  explicit Density(std::vector<double> coeffs);

  static Density constant(double value) { return Density({value}); }

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

/// A finite positive measure on [-1, 1]: atoms plus an optional polynomial density
/// integrated by Gauss-Legendre quadrature of the given order.
class MeasureSpec {
 public:
  static constexpr int kDefaultOrder = 200;

  /// Validates atom locations and weights; the total mass must be positive.
  MeasureSpec(std::vector<Atom> atoms, std::optional<Density> density, int quadrature_order = kDefaultOrder);

  /// The zero measure (kept for edge-case experiments; MeasureSpec() rejects it).
  static MeasureSpec zero();
  static MeasureSpec lebesgue(int quadrature_order = kDefaultOrder);
  static MeasureSpec point_mass(double t, double w = 1.0);

  [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }
  [[nodiscard]] const std::optional<Density>& density() const { return density_; }
  [[nodiscard]] const GaussLegendreRule& rule() const { return *rule_; }

  /// Integral of w(t) / (c0 + c1 t) d mu(t) for the polynomial w = sum_k weight[k] t^k.
  [[nodiscard]] cd reciprocal_linear(cd c0, cd c1, std::span<const double> weight) const;
  [[nodiscard]] cd reciprocal_linear(cd c0, cd c1) const;

 private:
  MeasureSpec() = default;

  std::vector<Atom> atoms_;
  std::optional<Density> density_;
  std::shared_ptr<const GaussLegendreRule> rule_;
};

/// k-th moment of mu for k in {0, 1, 2}; throws DomainError otherwise.
double moments(const MeasureSpec& mu, int k);

/// {"atoms": [{"t": .., "w": ..}], "density": {"kind": "constant"|"poly", "coeffs": [..],
///  "quadrature_order": 200}}. Throws ConfigError on malformed input.
MeasureSpec measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const MeasureSpec& mu);

}  // namespace bidisk
