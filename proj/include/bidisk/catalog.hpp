#pragma once

// Analytic maps from the bidisk to the closed unit disk.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bidisk/errors.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/measure.hpp"

namespace bidisk {

using cd = std::complex<double>;

/// Bivariate polynomial; coeffs[i][j] multiplies z1^i z2^j.
class Polynomial2 {
 public:
  Polynomial2() = default;
  explicit Polynomial2(std::vector<std::vector<cd>> coeffs);

  [[nodiscard]] cd operator()(cd z1, cd z2) const;
  [[nodiscard]] const std::vector<std::vector<cd>>& coeffs() const { return coeffs_; }

  friend Polynomial2 operator*(const Polynomial2& p, const Polynomial2& q);

 private:
  std::vector<std::vector<cd>> coeffs_;
};

struct Rational2 {
  Polynomial2 numer;
  Polynomial2 denom;
};

/// Denominator vanished at the evaluation point.
class PoleError : public DomainError {
 public:
  PoleError(const Point2& where, const std::string& what) : DomainError(what), point(where) {}
  Point2 point;
};

class AnalyticFunction {
 public:
  using Evaluator = std::function<cd(const Point2&)>;
  using DiagonalOverride = std::function<cd(cd)>;
  using BranchPhase = std::function<double(const Point2&)>;
  /// phi(1 - a, 1 - b), written in the complementary coordinates a = 1 - z1, b = 1 - z2.
  using Complement = std::function<cd(cd, cd)>;

  AnalyticFunction(std::string name, Evaluator eval, bool is_rational);

  /// A function given in complementary coordinates; operator() forms 1 - z itself.
  static AnalyticFunction from_complement(std::string name, Complement c, bool is_rational);

  [[nodiscard]] cd operator()(const Point2& z) const { return eval_(z); }
  [[nodiscard]] cd operator()(cd z1, cd z2) const { return eval_({z1, z2}); }

  /// phi(tau + d). Functions with a complement evaluate it from (1 - tau) - d, so
  /// that small offsets keep their relative precision.
  [[nodiscard]] cd at_offset(const BoundaryPoint& tau, cd d1, cd d2) const;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] bool is_rational() const { return is_rational_; }
  [[nodiscard]] const std::map<std::string, double>& params() const { return params_; }
  [[nodiscard]] const std::optional<DiagonalOverride>& diagonal_override() const { return diagonal_; }
  [[nodiscard]] const std::optional<Rational2>& rational() const { return rational_; }

  /// Imaginary part of the logarithm used by the evaluator, for functions that
  /// contain one; consecutive points of a path must not differ by more than pi.
  [[nodiscard]] const std::optional<BranchPhase>& branch_phase() const { return branch_phase_; }
  [[nodiscard]] const std::optional<Complement>& complement() const { return complement_; }

  AnalyticFunction& with_params(std::map<std::string, double> params);
  AnalyticFunction& with_diagonal_override(DiagonalOverride d);
  AnalyticFunction& with_rational(Rational2 r);
  AnalyticFunction& with_branch_phase(BranchPhase p);

 private:
  std::string name_;
  Evaluator eval_;
  bool is_rational_;
  std::map<std::string, double> params_;
  std::optional<DiagonalOverride> diagonal_;
  std::optional<Rational2> rational_;
  std::optional<BranchPhase> branch_phase_;
  std::optional<Complement> complement_;
};

enum class Builtin { phi1, phi2, phi3, phi4 };

/// Throws ConfigError for unknown names.
Builtin parse_builtin(const std::string& name);
std::string to_string(Builtin b);

inline constexpr int kDefaultPhi4Truncation = 20;

/// The four example functions. phi4 reads params["N"] (default 20, must be >= 1)
/// and is the N-term partial product.
AnalyticFunction builtin(Builtin which, const std::map<std::string, double>& params = {});

/// Coefficient grids of phi1, used to cross-check the rational evaluator.
Rational2 phi1_coefficients();

struct SchurCheck {
  bool passed = true;
  double max_modulus = 0.0;
  Point2 worst;
  std::string diagnostic;
};

inline constexpr double kSchurTolerance = 1e-9;

/// |phi| <= 1 + 1e-9 on `count` quasi-random interior points. Non-finite values
/// (poles) fail the check.
SchurCheck schur_sample_check(const AnalyticFunction& phi, std::size_t count = 10000, std::size_t seed = 0);

/// Rational function numer / denom, evaluated by Horner's rule. Construction runs
/// schur_sample_check and throws ConfigError with its diagnostic on failure;
/// evaluation at a zero of the denominator throws PoleError.
AnalyticFunction rational(Polynomial2 numer, Polynomial2 denom, std::string name = "rational",
                          std::size_t seed = 0);

/// (1 - psi) / (1 + psi) with psi(z) = 4 * integral of
/// [(1 - t)(1 + z1)/(1 - z1) + (1 + t)(1 + z2)/(1 - z2)]^{-1} d mu(t).
/// Rational exactly when mu has no density.
AnalyticFunction from_measure_recipe(const MeasureSpec& mu);

/// Function descriptor: {"builtin": "phi2", "params": {"N": 20}},
/// {"rational": {"numer": [[[re, im], ...], ...], "denom": ...}} or
/// {"recipe": {"measure": {...}}}. Throws ConfigError on malformed input.
AnalyticFunction function_from_json(const nlohmann::json& j, std::size_t seed = 0);

/// Throws NumericalFault if the branch phase jumps by more than pi between
/// consecutive points of the path. No-op for functions without a logarithm.
void check_branch_continuity(const AnalyticFunction& phi, std::span<const Point2> path);

}  // namespace bidisk
