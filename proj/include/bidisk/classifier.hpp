#pragma once

// Boundary regularity at a torus point: Julia quotients, directional
// derivatives, slope recovery and the B / B+ / C classification.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bidisk/catalog.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/pick.hpp"

namespace bidisk {

using cd = std::complex<double>;

struct JuliaSample {
  Point2 z;
  double quotient = 0.0;
  double aperture = 0.0;
  double t = 0.0;
  std::size_t direction_index = 0;
};

struct DerivativeSample {
  Direction h;
  cd value;
  /// Difference between the last two Richardson levels of the chosen window,
  /// raised to the rounding floor.
  double extrapolation_error = 0.0;
  /// The raw difference between the last two levels.
  double level_difference = 0.0;
  /// Rounding noise of the window's difference quotients, amplified by the extrapolation.
  double rounding_floor = 0.0;
};

/// (1 - |phi(z)|) / (1 - ||z||) with the sup norm. Throws DomainError for non-interior z.
double julia_quotient(const AnalyticFunction& phi, const Point2& z);

/// Radial path z_k = (1 - t_k) tau.
std::vector<Point2> radial_path(const BoundaryPoint& tau, std::span<const double> t_schedule);

struct OmegaEstimate {
  cd omega;
  /// Successive differences along the radial path are non-increasing and the
  /// last one is below 1e-9.
  bool converged = false;
  double extrapolation_error = 0.0;
  std::vector<cd> path_values;
};

/// Limit of phi along the radial path. `omega` is the Richardson limit of the
/// path values; `converged` is the raw Cauchy test.
OmegaEstimate estimate_omega(const AnalyticFunction& phi, const BoundaryPoint& tau,
                             const ScheduleSpec& schedule = {}, int levels = 4);

struct ApertureGamma {
  double aperture = 0.0;
  double sup = 0.0;
  /// Sup over the cone at each tail t (NaN where the cone has no sample).
  std::vector<double> per_t_sup;
  std::size_t sample_count = 0;
  std::optional<JuliaSample> argmax;
  bool empty() const { return sample_count == 0; }
};

/// Sup of the Julia quotient over cone_grid(cone(tau, M), t_tail, directions),
/// for each aperture M.
std::vector<ApertureGamma> nt_gamma(const AnalyticFunction& phi, const BoundaryPoint& tau,
                                    std::span<const double> apertures, std::span<const double> t_tail,
                                    std::span<const Direction> directions);

/// Richardson-extrapolated (phi(tau + t h) - omega) / t over the scheduled t for
/// which tau + t h is interior. Throws DomainError when fewer than `levels`
/// scheduled points are interior; NumericalFault on a log branch jump.
DerivativeSample directional_derivative(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                                        const Direction& h, int levels = 4, const ScheduleSpec& schedule = {});

struct EscalationSequence {
  std::string label;
  std::vector<double> eps;
  std::vector<Direction> directions;
};

struct DirectionFamily {
  std::vector<Direction> bulk;
  std::vector<EscalationSequence> escalations;
  /// When non-empty, bplus_probe also escalates along the tangential pair
  /// (-eps + i s rho, -eps - i s) at the rho that maximizes |D| / ||h||, refined
  /// afresh at each eps. The ratio h2 / h1 then sweeps the whole cut (-inf, 0),
  /// where a slope function with an interior atom has its pole.
  std::vector<double> scan_eps;
};

inline const std::vector<double> kDefaultEscalationEps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

/// Bulk: lattice with limiting apertures up to 8. Escalations: local directions
/// (-eps + i a, -eps + i b) for (a, b) in a fixed set of imaginary patterns,
/// including (2, -1), plus the adaptive cut scan over the same eps.
DirectionFamily default_direction_family(const BoundaryPoint& tau,
                                         const std::vector<double>& eps = kDefaultEscalationEps);

struct EscalationTrace {
  std::string label;
  std::vector<double> eps;
  std::vector<DerivativeSample> samples;
  /// |D| / ||h|| per step.
  std::vector<double> ratios;
  bool trend_positive = false;
};

struct BPlusProbe {
  double alpha_estimate = 0.0;
  bool diverging = false;
  /// Escalating sequence whose peak lies within 10x of the ceiling.
  bool inconclusive = false;
  Direction worst_direction;
  std::vector<DerivativeSample> bulk;
  std::vector<EscalationTrace> escalations;
};

inline constexpr double kDefaultBPlusCeiling = 1e3;

/// |D phi(tau)[h]| / ||h|| over the family. An escalation sequence diverges when
/// its last three ratios increase and its peak exceeds the ceiling.
BPlusProbe bplus_probe(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                       const DirectionFamily& family, double ceiling = kDefaultBPlusCeiling, int levels = 4,
                       const ScheduleSpec& schedule = {});

struct CProbe {
  std::pair<cd, cd> lambda;
  /// max |D(h) - lambda . h| / ||h|| over the design.
  double beta_residual = 0.0;
  std::vector<DerivativeSample> samples;
};

/// Moderate-aperture design for c_probe (limiting apertures up to 2).
std::vector<Direction> default_c_design(const BoundaryPoint& tau);

/// Least-squares fit of the directional derivative by a linear map h -> lambda . h.
CProbe c_probe(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
               std::span<const Direction> design, int levels = 4, const ScheduleSpec& schedule = {});

/// Which coordinate ratio the slope function is evaluated at.
enum class SlopeConvention {
  second_over_first,  // D[h] = -omega conj(tau2) h2 eta(conj(tau2) h2 / (conj(tau1) h1))
  first_over_second,  // same with the ratio inverted
};

struct SlopeSample {
  cd w;
  /// eta from the directional derivative formula with the chosen convention.
  cd eta_direct;
  /// eta from the Pick function f(z) = -i conj(omega) D[(i tau1 z1, i tau2 z2)].
  cd eta_pick;
  double error_direct = 0.0;
  double error_pick = 0.0;
  bool agree = false;
};

struct RecoveredSlope {
  std::vector<SlopeSample> samples;
};

/// Recovers eta(w) at each ratio by two routes and requires them to agree within
/// 10x the combined extrapolation error (floor 1e-11 max(1, |eta|)). Throws
/// NumericalFault ("convention fault") otherwise.
RecoveredSlope recover_slope(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                             std::span<const cd> ratios,
                             SlopeConvention convention = SlopeConvention::second_over_first, int levels = 4,
                             const ScheduleSpec& schedule = {});

/// Slope function of phi at tau, each value computed from a directional derivative.
SlopeFunction derivative_slope(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, int levels = 4,
                               const ScheduleSpec& schedule = {});

/// f(z1, z2) = -i conj(omega) D phi(tau)[(i tau1 z1, i tau2 z2)], a homogeneous
/// Pick function whenever tau is a B point.
HomogeneousPick derivative_pick(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, int levels = 4,
                                const ScheduleSpec& schedule = {});

enum class Verdict { none, B, Bplus, C };
std::string to_string(Verdict v);

enum class GateStatus { pass, fail, inconclusive, skipped };
std::string to_string(GateStatus s);

struct GateRecord {
  std::string name;
  GateStatus status = GateStatus::skipped;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct ClassifyConfig {
  ScheduleSpec schedule{1.0, 2.0, 40};
  int levels = 4;
  std::vector<double> apertures{1.0, 2.0, 4.0, 8.0, 16.0};
  /// Julia-quotient sweeps use the last `nt_tail` points of this schedule.
  ScheduleSpec nt_schedule{1.0, 2.0, 23};
  int nt_tail = 8;
  LatticeSpec nt_lattice = LatticeSpec::aperture_octaves(5, 4);
  double b_threshold = 1e3;
  double bplus_ceiling = kDefaultBPlusCeiling;
  double c_tol = 1e-4;
  double omega_tol = 1e-6;
  std::vector<double> escalation_eps = kDefaultEscalationEps;
  /// Ratios probed by recover_slope in the report.
  std::vector<cd> slope_ratios{cd(1.0), cd(2.0), cd(0.5), cd(0.0, 1.0), cd(1.0, -1.0)};

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct RadialEvidence {
  std::vector<JuliaSample> samples;
  double tail_sup = 0.0;
  double limit = 0.0;
  double limit_error = 0.0;
  /// The Richardson limit of the quotient is finite with error below 1e-3 (relative).
  bool limit_certified = false;
};

/// Julia quotients along the radial path; the tail is the last half of the schedule.
RadialEvidence radial_evidence(const AnalyticFunction& phi, const BoundaryPoint& tau,
                               const ScheduleSpec& schedule = {}, int levels = 4);

/// Julia-quotient rows for tau + t h over the schedule and directions, in
/// (t, direction) order. With a max_aperture only points of the cone are kept.
/// Throws ConfigError when no point survives.
std::vector<JuliaSample> julia_sweep(const AnalyticFunction& phi, const BoundaryPoint& tau,
                                     std::span<const double> t_schedule, std::span<const Direction> directions,
                                     std::optional<double> max_aperture = std::nullopt);

struct RationalReprobe {
  /// Raw residual; pass/fail compares beta_residual / max(1, alpha) with the threshold.
  double beta_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ClassificationReport {
  std::string function_name;
  bool is_rational = false;
  std::map<std::string, double> params;
  BoundaryPoint tau = BoundaryPoint::chi();
  OmegaEstimate omega;
  Verdict verdict = Verdict::none;
  std::vector<ApertureGamma> gamma_by_aperture;
  double alpha_estimate = 0.0;
  std::optional<std::pair<cd, cd>> lambda;
  double beta_residual = 0.0;
  RadialEvidence radial;
  std::optional<BPlusProbe> bplus;
  std::optional<CProbe> c;
  std::optional<RecoveredSlope> slope;
  std::optional<RationalReprobe> rational_reprobe;
  std::vector<GateRecord> gates;
  std::vector<std::string> warnings;
};

/// omega -> B gate (radial Julia quotient) -> B+ gate (bplus_probe) -> C gate
/// (c_probe, beta_residual / max(1, alpha) against c_tol); the verdict is the
/// deepest gate passed. Numerical non-convergence
/// is recorded in the report, never thrown; branch and convention faults throw
/// NumericalFault.
ClassificationReport classify(const AnalyticFunction& phi, const BoundaryPoint& tau, const ClassifyConfig& config = {});

struct EscalationStep {
  int n = 0;
  double gamma = 0.0;
  double alpha = 0.0;
};

struct EscalationDiagnostic {
  std::vector<EscalationStep> steps;
  /// gamma and alpha each grow by at least 2x per step.
  bool geometric = false;
};

/// Radial Julia-quotient limit and B+ bulk alpha for each member of a family of
/// truncations phi_N.
EscalationDiagnostic escalation_diagnostic(const std::function<AnalyticFunction(int)>& family,
                                           std::span<const int> ns, const BoundaryPoint& tau,
                                           const ClassifyConfig& config = {});

}  // namespace bidisk
