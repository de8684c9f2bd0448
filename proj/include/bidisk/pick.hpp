#pragma once

// Degree-one homogeneous Pick functions of two variables and the slope
// functions eta that parametrize them, both built from measures on [-1, 1].

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>
#include <utility>

#include "bidisk/measure.hpp"

namespace bidisk {

using cd = std::complex<double>;

inline bool in_upper_half_plane(cd z) { return z.imag() > 0.0; }

/// A one-variable function eta on C minus (-inf, 0] with eta and -w*eta(w) Pick.
class SlopeFunction {
 public:
  using Evaluator = std::function<cd(cd)>;

  explicit SlopeFunction(Evaluator eval, std::optional<MeasureSpec> source = std::nullopt)
      : eval_(std::move(eval)), source_(std::move(source)) {}

  /// Throws DomainError for w on the cut (-inf, 0].
  [[nodiscard]] cd operator()(cd w) const;

  [[nodiscard]] const std::optional<MeasureSpec>& source() const { return source_; }

 private:
  Evaluator eval_;
  std::optional<MeasureSpec> source_;
};

/// f(z1, z2) = A z1 + B z2 + (z2 - z1) g((z1 + z2) / (z2 - z1)).
struct ResolvedForm {
  double a = 0.0;  // mu0 - mu1
  double b = 0.0;  // mu0 + mu1
  std::function<cd(cd)> g;
};

class HomogeneousPick {
 public:
  using Evaluator = std::function<cd(cd, cd)>;

  explicit HomogeneousPick(Evaluator eval, std::optional<ResolvedForm> resolved = std::nullopt,
                           std::optional<MeasureSpec> source = std::nullopt)
      : eval_(std::move(eval)), resolved_(std::move(resolved)), source_(std::move(source)) {}

  /// Evaluates f on the upper half-plane squared; throws DomainError elsewhere.
  [[nodiscard]] cd operator()(cd z1, cd z2) const;

  /// Evaluates without the domain check (for continuation to other homogeneous rays).
  [[nodiscard]] cd unchecked(cd z1, cd z2) const { return eval_(z1, z2); }

  [[nodiscard]] const std::optional<ResolvedForm>& resolved() const { return resolved_; }
  [[nodiscard]] const std::optional<MeasureSpec>& source() const { return source_; }

 private:
  Evaluator eval_;
  std::optional<ResolvedForm> resolved_;
  std::optional<MeasureSpec> source_;
};

/// eta(w) = -4 * integral of 1 / ((1 - t) + (1 + t) w) d mu(t).
SlopeFunction eta_from_measure(const MeasureSpec& mu);

/// f(z1, z2) = 4 * integral of z1 z2 / ((1 + t) z1 + (1 - t) z2) d mu(t), with the
/// resolved form populated from the moments and cauchy_g.
HomogeneousPick f_from_measure(const MeasureSpec& mu);

/// g(zeta) = integral of (1 - t^2) / (t - zeta) d mu(t); throws DomainError on [-1, 1].
std::function<cd(cd)> cauchy_g(const MeasureSpec& mu);

/// Relative width of the diagonal tube in which resolved_eval returns (A + B) z1.
inline constexpr double kResolvedDiagonalTube = 1e-8;

/// Evaluates the resolved form of hp; throws std::invalid_argument if hp has none.
cd resolved_eval(const HomogeneousPick& hp, cd z1, cd z2);

/// f(z1, z2) = -z2 eta(z2 / z1) when z2 / z1 is in the upper half-plane and
/// -z2 conj(eta(conj(z2) / conj(z1))) when it is in the lower one. Ratios within
/// 1e-13 of the positive axis are evaluated on the axis, where both agree.
HomogeneousPick eta_to_f(SlopeFunction eta);

/// Interval of s for which (-e^{-is}/w, -e^{-is}) lies in the upper half-plane squared.
/// Throws DomainError when w is on (or within 1e-12 in angle of) the cut.
std::pair<double, double> admissible_s(cd w);

/// eta(w) = e^{is} f(-e^{-is}/w, -e^{-is}) for a given admissible s.
cd eta_from_f_at(const HomogeneousPick& hp, cd w, double s);

/// Slope function of hp, evaluated at the centre of the admissible s interval and
/// re-evaluated at the quarter point; a disagreement beyond 1e-10 (relative)
/// throws NumericalFault.
SlopeFunction f_to_eta(HomogeneousPick hp);

struct GBoundProbe {
  bool bounded = false;
  double bound_estimate = 0.0;
  cd witness;
  std::vector<double> shell_distances;  // near shells, then the far shell radius
  std::vector<double> shell_sups;
};

/// Samples |g| on shells at distance 1e-1 ... 1e-8 from [-1, 1] and on |zeta| = 1e3.
/// Bounded when every ratio of successive near-shell sups is below 1.5.
GBoundProbe g_bound_probe(const HomogeneousPick& hp);

struct LinearityResult {
  bool is_linear = false;
  std::pair<cd, cd> lambda;
  double residual = 0.0;
  /// Set when hp carries a resolved form: whether lambda matches (A, B) to 1e-8.
  std::optional<bool> matches_moments;
};

inline constexpr double kDefaultLinearityTol = 1e-6;

/// Least-squares fit of f by lambda1 z1 + lambda2 z2 over a fixed 64-point design
/// in the upper half-plane squared; residual is max |f - fit| / max |f|.
LinearityResult linearity_test(const HomogeneousPick& hp, double tol = kDefaultLinearityTol);

/// Fixed 64-point design used by linearity_test.
std::vector<std::pair<cd, cd>> linearity_design();

}  // namespace bidisk

namespace bidisk {

struct LinearFit {
  std::pair<cd, cd> lambda;
  /// Largest |value - lambda . (x1, x2)| over the samples.
  double max_abs_residual = 0.0;
};

/// Complex least squares for value ~ lambda1 x1 + lambda2 x2.
LinearFit fit_linear2(std::span<const cd> x1, std::span<const cd> x2, std::span<const cd> values);

}  // namespace bidisk
