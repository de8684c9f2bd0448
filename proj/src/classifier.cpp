#include "bidisk/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bidisk/errors.hpp"
#include "bidisk/richardson.hpp"

namespace bidisk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
const cd kI(0.0, 1.0);

// Rounding of a function value relative to its modulus, used as the per-sample
// noise of difference quotients (a few ulps).
constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

// Routes of recover_slope must agree within 10x their combined extrapolation
// error; this floor (relative to |eta|) stands in for rounding when both
// extrapolations happen to be exact.
constexpr double kSlopeAgreementFloor = 1e-10;

bool safely_interior(const Point2& z) { return z.is_interior() && 1.0 - z.sup_norm() >= kInteriorMargin; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Largest value with NaN treated as +inf, so a broken sample is never hidden.
double sup_key(double v) { return std::isnan(v) ? kInf : v; }

LatticeSpec bulk_lattice() { return LatticeSpec::aperture_octaves(3, 2, {1.0, 0.5}); }

std::vector<double> tail_of(const std::vector<double>& ts, int tail) {
  const std::size_t n = std::min<std::size_t>(ts.size(), static_cast<std::size_t>(tail));
  return {ts.end() - static_cast<std::ptrdiff_t>(n), ts.end()};
}

// Checks the log branch along each direction's path of grid samples.
template <typename Sample>
void check_paths(const AnalyticFunction& phi, const std::vector<Sample>& samples, std::size_t n_directions) {
  if (!phi.branch_phase()) return;
  std::vector<std::vector<Point2>> paths(n_directions);
  for (const auto& s : samples) paths[s.direction_index].push_back(s.z);
  for (const auto& p : paths) check_branch_continuity(phi, p);
}

}  // namespace

double julia_quotient(const AnalyticFunction& phi, const Point2& z) {
  if (!z.is_interior()) throw DomainError("julia_quotient: point is not in the open bidisk");
  return (1.0 - std::abs(phi(z))) / (1.0 - z.sup_norm());
}

std::vector<Point2> radial_path(const BoundaryPoint& tau, std::span<const double> t_schedule) {
  std::vector<Point2> path;
  path.reserve(t_schedule.size());
  for (double t : t_schedule) path.push_back({(1.0 - t) * tau.tau1(), (1.0 - t) * tau.tau2()});
  return path;
}

OmegaEstimate estimate_omega(const AnalyticFunction& phi, const BoundaryPoint& tau, const ScheduleSpec& schedule,
                             int levels) {
  OmegaEstimate out;
  std::vector<Point2> path;
  for (const Point2& z : radial_path(tau, schedule.points())) {
    if (safely_interior(z)) path.push_back(z);
  }
  if (path.empty()) throw ConfigError("estimate_omega: the schedule has no interior radial point");
  check_branch_continuity(phi, path);
  for (const Point2& z : path) out.path_values.push_back(phi(z));

  // Extrapolate from the tail half only: early windows can be spuriously exact
  // (a schedule through zeros of phi yields windows of identical values).
  const std::span<const cd> tail(out.path_values.begin() + static_cast<std::ptrdiff_t>(path.size() / 2),
                                 out.path_values.end());
  if (auto est = richardson_best_window(tail, schedule.ratio, levels)) {
    out.omega = est->value;
    out.extrapolation_error = est->error;
  } else {
    out.omega = out.path_values.back();
    out.extrapolation_error = kInf;
  }

  const auto& v = out.path_values;
  bool monotone = v.size() >= 2;
  double last = kInf;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double d = std::abs(v[k] - v[k - 1]);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v[k]));
    if (!std::isfinite(d) || d > last + slack) monotone = false;
    last = d;
  }
  out.converged = monotone && last < 1e-9;
  return out;
}

RadialEvidence radial_evidence(const AnalyticFunction& phi, const BoundaryPoint& tau, const ScheduleSpec& schedule,
                               int levels) {
  RadialEvidence ev;
  const std::vector<double> ts = schedule.points();
  for (double t : ts) {
    const Point2 z{(1.0 - t) * tau.tau1(), (1.0 - t) * tau.tau2()};
    if (!safely_interior(z)) continue;
    ev.samples.push_back({z, julia_quotient(phi, z), aperture_of(z, tau), t, 0});
  }
  if (ev.samples.empty()) throw ConfigError("radial_evidence: the schedule has no interior radial point");

  std::vector<cd> q;
  std::vector<double> noise;
  for (const auto& s : ev.samples) {
    q.emplace_back(s.quotient);
    noise.push_back(kRoundoff * (1.0 + std::abs(s.quotient)) / (1.0 - s.z.sup_norm()));
  }
  ev.tail_sup = -kInf;
  for (std::size_t k = ev.samples.size() / 2; k < ev.samples.size(); ++k) {
    ev.tail_sup = std::max(ev.tail_sup, sup_key(ev.samples[k].quotient));
  }
  const auto half = static_cast<std::ptrdiff_t>(q.size() / 2);
  const std::span<const cd> q_tail(q.begin() + half, q.end());
  const std::span<const double> noise_tail(noise.begin() + half, noise.end());
  if (auto est = richardson_best_window(q_tail, schedule.ratio, levels, noise_tail)) {
    ev.limit = est->value.real();
    ev.limit_error = est->error;
    ev.limit_certified = std::isfinite(ev.limit) && ev.limit_error <= 1e-3 * std::abs(ev.limit);
  } else {
    ev.limit = kNaN;
    ev.limit_error = kInf;
  }
  return ev;
}

std::vector<JuliaSample> julia_sweep(const AnalyticFunction& phi, const BoundaryPoint& tau,
                                     std::span<const double> t_schedule, std::span<const Direction> directions,
                                     std::optional<double> max_aperture) {
  std::vector<JuliaSample> rows;
  if (max_aperture) {
    const ConeGrid grid = cone_grid(NontangentialCone(tau, *max_aperture), t_schedule, directions);
    for (const auto& s : grid.samples) {
      rows.push_back({s.z, julia_quotient(phi, s.z), s.aperture, s.t, s.direction_index});
    }
  } else {
    for (double t : t_schedule) {
      for (std::size_t j = 0; j < directions.size(); ++j) {
        const Point2 z = directions[j].at(tau, t);
        if (!safely_interior(z)) continue;
        rows.push_back({z, julia_quotient(phi, z), aperture_of(z, tau), t, j});
      }
    }
  }
  if (rows.empty()) {
    throw ConfigError(max_aperture ? "sweep: no scheduled point lies inside the cone of aperture " +
                                         num(*max_aperture) + " (pointwise apertures are at least 1)"
                                   : "sweep: no scheduled point lies inside the bidisk");
  }
  check_paths(phi, rows, directions.size());
  return rows;
}

std::vector<ApertureGamma> nt_gamma(const AnalyticFunction& phi, const BoundaryPoint& tau,
                                    std::span<const double> apertures, std::span<const double> t_tail,
                                    std::span<const Direction> directions) {
  std::vector<ApertureGamma> out;
  if (apertures.empty()) return out;
  double m_max = 0.0;
  for (double m : apertures) m_max = std::max(m_max, NontangentialCone(tau, m).aperture);

  // One grid for the widest cone; narrower cones are its subsets.
  const ConeGrid grid = cone_grid(NontangentialCone(tau, m_max), t_tail, directions);
  check_paths(phi, grid.samples, directions.size());
  std::vector<double> q;
  q.reserve(grid.samples.size());
  for (const auto& s : grid.samples) q.push_back(julia_quotient(phi, s.z));

  for (double m : apertures) {
    ApertureGamma g;
    g.aperture = m;
    g.sup = -kInf;
    g.per_t_sup.assign(t_tail.size(), kNaN);
    for (std::size_t i = 0; i < grid.samples.size(); ++i) {
      const ConeSample& s = grid.samples[i];
      if (s.aperture > m) continue;
      ++g.sample_count;
      const double v = sup_key(q[i]);
      if (v > g.sup) {
        g.sup = v;
        g.argmax = JuliaSample{s.z, q[i], s.aperture, s.t, s.direction_index};
      }
      double& slot = g.per_t_sup[s.t_index];
      if (std::isnan(slot) || v > slot) slot = v;
    }
    if (g.sample_count == 0) g.sup = kNaN;
    out.push_back(std::move(g));
  }
  return out;
}

DerivativeSample directional_derivative(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                                        const Direction& h, int levels, const ScheduleSpec& schedule) {
  if (!h.is_inward(tau)) throw DomainError("directional_derivative: direction is not inward at tau");
  const double t_max = h.max_inward_step(tau);
  std::vector<Point2> path;
  std::vector<double> ts;
  for (double t : schedule.points()) {
    const Point2 z = h.at(tau, t);
    if (t >= t_max || !safely_interior(z)) {
      if (!path.empty()) break;  // keep the samples consecutive in the schedule
      continue;
    }
    path.push_back(z);
    ts.push_back(t);
  }
  if (path.size() < static_cast<std::size_t>(std::max(levels, 2))) {
    throw DomainError("directional_derivative: only " + std::to_string(path.size()) +
                      " scheduled points lie inside the bidisk along h, need " + std::to_string(levels));
  }
  check_branch_continuity(phi, path);

  std::vector<cd> quotients;
  std::vector<double> noise;
  for (double t : ts) {
    const cd v = phi.at_offset(tau, t * h.h1, t * h.h2);
    quotients.push_back((v - omega) / t);
    noise.push_back(kRoundoff * std::max(std::abs(v), std::abs(omega)) / t);
  }
  const auto est = richardson_best_window(quotients, schedule.ratio, levels, noise);
  if (!est) throw DomainError("directional_derivative: difference quotients are not finite along h");
  return {h, est->value, est->error, est->difference, est->rounding_floor};
}

DirectionFamily default_direction_family(const BoundaryPoint& tau, const std::vector<double>& eps) {
  DirectionFamily family;
  family.bulk = direction_lattice(tau, bulk_lattice());
  // Imaginary parts of the local escalation directions; (2, -1) and (-2, 1) make
  // h1 + 2 h2 vanish in the limit.
  static constexpr std::pair<int, int> kPatterns[] = {{2, -1}, {-2, 1}, {1, -1}, {1, 1}, {1, 0}, {0, 1}};
  for (auto [a, b] : kPatterns) {
    EscalationSequence seq;
    std::ostringstream label;
    label << "(-eps" << std::showpos << a << "i, -eps" << b << "i)";
    seq.label = label.str();
    seq.eps = eps;
    for (double e : eps) seq.directions.push_back(Direction::from_local(tau, cd(-e, a), cd(-e, b)));
    family.escalations.push_back(std::move(seq));
  }
  family.scan_eps = eps;
  return family;
}

namespace {

// Escalation along (-eps + i s rho, -eps - i s): a coarse log-grid in rho at the
// first eps, then a golden-section refinement of the peak at every eps.
EscalationTrace cut_scan(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                         std::span<const double> eps, int levels, const ScheduleSpec& schedule,
                         std::vector<DerivativeSample>& samples) {
  auto direction = [&](double s, double log_rho, double e) {
    return Direction::from_local(tau, cd(-e, s * std::exp(log_rho)), cd(-e, -s));
  };
  auto ratio = [&](double s, double log_rho, double e) {
    const Direction h = direction(s, log_rho, e);
    try {
      const double r = std::abs(directional_derivative(phi, tau, omega, h, levels, schedule).value) / h.norm;
      return std::isfinite(r) ? r : 0.0;
    } catch (const DomainError&) {
      return 0.0;
    }
  };

  constexpr double kStep = std::numbers::ln2 / 4.0;
  double best_s = 1.0;
  double best_log = 0.0;
  double best = -1.0;
  for (double s : {1.0, -1.0}) {
    for (int k = -32; k <= 32; ++k) {
      const double r = ratio(s, k * kStep, eps.front());
      if (r > best) {
        best = r;
        best_s = s;
        best_log = k * kStep;
      }
    }
  }

  double half_width = kStep;
  std::vector<double> used_eps;
  for (double e : eps) {
    // Golden-section search; keeps the best point actually evaluated, so that a
    // bracket edge where no derivative exists is never chosen.
    constexpr double g = 0.6180339887498949;
    double peak_log = best_log;
    double peak = ratio(best_s, best_log, e);
    auto eval = [&](double x) {
      const double r = ratio(best_s, x, e);
      if (r > peak) {
        peak = r;
        peak_log = x;
      }
      return r;
    };
    double lo = best_log - half_width;
    double hi = best_log + half_width;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (int it = 0; it < 48; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = eval(x2);
      }
    }
    if (!(peak > 0.0)) break;  // no inward direction with a derivative at this eps
    best_log = peak_log;
    half_width = std::max(10.0 * e, 1e-9);
    samples.push_back(directional_derivative(phi, tau, omega, direction(best_s, best_log, e), levels, schedule));
    used_eps.push_back(e);
  }

  EscalationTrace trace;
  std::ostringstream label;
  label << "cut scan (-eps" << (best_s > 0 ? "+" : "-") << num(std::exp(best_log)) << "i, -eps"
        << (best_s > 0 ? "-" : "+") << "1i)";
  trace.label = label.str();
  trace.eps = std::move(used_eps);
  return trace;
}

}  // namespace

BPlusProbe bplus_probe(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                       const DirectionFamily& family, double ceiling, int levels, const ScheduleSpec& schedule) {
  BPlusProbe out;
  double worst = -1.0;
  for (const Direction& h : family.bulk) {
    DerivativeSample d = directional_derivative(phi, tau, omega, h, levels, schedule);
    const double r = sup_key(std::abs(d.value) / h.norm);
    out.alpha_estimate = std::max(out.alpha_estimate, r);
    if (r > worst) {
      worst = r;
      out.worst_direction = h;
    }
    out.bulk.push_back(std::move(d));
  }
  auto record = [&](EscalationTrace& trace, DerivativeSample d) {
    const double r = sup_key(std::abs(d.value) / d.h.norm);
    trace.ratios.push_back(r);
    if (r > worst) {
      worst = r;
      out.worst_direction = d.h;
    }
    trace.samples.push_back(std::move(d));
  };
  auto finish = [&](EscalationTrace trace) {
    // Growth, not mere increase: a bounded derivative may creep upward as the
    // sequence converges, an unbounded one grows with 1/eps.
    const auto& r = trace.ratios;
    const std::size_t n = r.size();
    const double peak = n == 0 ? 0.0 : *std::max_element(r.begin(), r.end());
    trace.trend_positive = n >= 3 && r[n - 2] >= 2.0 * r[n - 3] && r[n - 1] >= 2.0 * r[n - 2];
    if (trace.trend_positive) {
      if (peak > ceiling) out.diverging = true;
      if (peak >= ceiling / 10.0 && peak <= ceiling * 10.0) out.inconclusive = true;
    }
    out.escalations.push_back(std::move(trace));
  };
  for (const EscalationSequence& seq : family.escalations) {
    EscalationTrace trace;
    trace.label = seq.label;
    trace.eps = seq.eps;
    for (const Direction& h : seq.directions) record(trace, directional_derivative(phi, tau, omega, h, levels, schedule));
    finish(std::move(trace));
  }
  if (!family.scan_eps.empty()) {
    std::vector<DerivativeSample> samples;
    EscalationTrace trace = cut_scan(phi, tau, omega, family.scan_eps, levels, schedule, samples);
    for (auto& d : samples) record(trace, std::move(d));
    finish(std::move(trace));
  }
  return out;
}

std::vector<Direction> default_c_design(const BoundaryPoint& tau) {
  constexpr double pi = std::numbers::pi;
  return direction_lattice(tau, LatticeSpec{{0.0, pi / 6, -pi / 6, pi / 3, -pi / 3}, {1.0, 0.5}});
}

CProbe c_probe(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, std::span<const Direction> design,
               int levels, const ScheduleSpec& schedule) {
  if (design.size() < 2) throw ConfigError("c_probe: the design needs at least two directions");
  CProbe out;
  std::vector<cd> x1, x2, values;
  for (const Direction& h : design) {
    out.samples.push_back(directional_derivative(phi, tau, omega, h, levels, schedule));
    x1.push_back(h.h1);
    x2.push_back(h.h2);
    values.push_back(out.samples.back().value);
  }
  const LinearFit fit = fit_linear2(x1, x2, values);
  out.lambda = fit.lambda;
  for (const auto& s : out.samples) {
    const cd r = s.value - (fit.lambda.first * s.h.h1 + fit.lambda.second * s.h.h2);
    out.beta_residual = std::max(out.beta_residual, sup_key(std::abs(r) / s.h.norm));
  }
  return out;
}

namespace {

struct DirectRoute {
  cd eta;
  double error;
};

DirectRoute direct_route(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, cd w,
                         SlopeConvention convention, int levels, const ScheduleSpec& schedule) {
  // u = (-e^{-i arg(w)/2}, w u1): both real parts negative, u2 / u1 = w.
  const cd base = -std::polar(1.0, -std::arg(w) / 2.0);
  cd u1 = base;
  cd u2 = w * base;
  if (convention == SlopeConvention::first_over_second) std::swap(u1, u2);
  const double scale = std::max(std::abs(u1), std::abs(u2));
  u1 /= scale;
  u2 /= scale;
  const DerivativeSample d =
      directional_derivative(phi, tau, omega, Direction::from_local(tau, u1, u2), levels, schedule);
  return {-d.value / (omega * u2), d.extrapolation_error / std::abs(u2)};
}

}  // namespace

RecoveredSlope recover_slope(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega,
                             std::span<const cd> ratios, SlopeConvention convention, int levels,
                             const ScheduleSpec& schedule) {
  RecoveredSlope out;
  for (cd w : ratios) {
    const auto [lo, hi] = admissible_s(w);
    const double s = 0.5 * (lo + hi);

    SlopeSample sample;
    sample.w = w;
    const DirectRoute direct = direct_route(phi, tau, omega, w, convention, levels, schedule);
    sample.eta_direct = direct.eta;
    sample.error_direct = direct.error;

    const cd e = std::polar(1.0, -s);
    const Direction hp(kI * tau.tau1() * (-e / w), kI * tau.tau2() * (-e));
    const DerivativeSample d = directional_derivative(phi, tau, omega, hp, levels, schedule);
    sample.eta_pick = std::polar(1.0, s) * (-kI * std::conj(omega) * d.value);
    sample.error_pick = d.extrapolation_error;

    const double tol = 10.0 * (sample.error_direct + sample.error_pick) +
                       kSlopeAgreementFloor * std::max(1.0, std::abs(sample.eta_pick));
    const double gap = std::abs(sample.eta_direct - sample.eta_pick);
    sample.agree = gap <= tol;
    if (!sample.agree) {
      std::ostringstream os;
      os.precision(17);
      os << "convention fault in " << phi.name() << " at w = " << w << ": the directional-derivative route gives "
         << sample.eta_direct << ", the Pick-function route gives " << sample.eta_pick << " (gap " << gap
         << ", tolerance " << tol << ")";
      throw NumericalFault(os.str());
    }
    out.samples.push_back(sample);
  }
  return out;
}

SlopeFunction derivative_slope(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, int levels,
                               const ScheduleSpec& schedule) {
  return SlopeFunction([phi, tau, omega, levels, schedule](cd w) {
    return direct_route(phi, tau, omega, w, SlopeConvention::second_over_first, levels, schedule).eta;
  });
}

HomogeneousPick derivative_pick(const AnalyticFunction& phi, const BoundaryPoint& tau, cd omega, int levels,
                                const ScheduleSpec& schedule) {
  return HomogeneousPick([phi, tau, omega, levels, schedule](cd z1, cd z2) {
    const Direction h(kI * tau.tau1() * z1, kI * tau.tau2() * z2);
    return -kI * std::conj(omega) * directional_derivative(phi, tau, omega, h, levels, schedule).value;
  });
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::none: return "none";
    case Verdict::B: return "B";
    case Verdict::Bplus: return "Bplus";
    case Verdict::C: return "C";
  }
  return "?";
}

std::string to_string(GateStatus s) {
  switch (s) {
    case GateStatus::pass: return "pass";
    case GateStatus::fail: return "fail";
    case GateStatus::inconclusive: return "inconclusive";
    case GateStatus::skipped: return "skipped";
  }
  return "?";
}

void ClassifyConfig::validate() const {
  auto check_schedule = [](const ScheduleSpec& s, const char* what) {
    if (s.depth < 8) throw ConfigError(std::string(what) + ": schedule depth must be at least 8");
    if (!(s.ratio > 1.0) || !std::isfinite(s.ratio)) throw ConfigError(std::string(what) + ": ratio must exceed 1");
    if (!(s.radius > 0.0 && s.radius <= 1.0)) throw ConfigError(std::string(what) + ": radius must be in (0, 1]");
  };
  check_schedule(schedule, "schedule");
  check_schedule(nt_schedule, "nt_schedule");
  if (levels < 2) throw ConfigError("richardson levels must be at least 2");
  if (levels > schedule.depth) throw ConfigError("richardson levels exceed the schedule depth");
  if (apertures.empty()) throw ConfigError("apertures must not be empty");
  for (std::size_t i = 0; i < apertures.size(); ++i) {
    if (!(apertures[i] > 0.0) || !std::isfinite(apertures[i])) throw ConfigError("apertures must be positive");
    if (i > 0 && !(apertures[i] > apertures[i - 1])) throw ConfigError("apertures must be strictly ascending");
  }
  if (nt_tail < 1 || nt_tail > nt_schedule.depth) throw ConfigError("nt_tail must be in [1, nt_schedule depth]");
  if (nt_lattice.angles.empty()) throw ConfigError("nt_lattice needs at least one angle");
  for (double v : {b_threshold, bplus_ceiling, c_tol, omega_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("gate thresholds must be positive");
  }
  if (escalation_eps.size() < 3) throw ConfigError("escalation needs at least three eps values");
  for (std::size_t i = 0; i < escalation_eps.size(); ++i) {
    if (!(escalation_eps[i] > 0.0)) throw ConfigError("escalation eps must be positive");
    if (i > 0 && !(escalation_eps[i] < escalation_eps[i - 1])) {
      throw ConfigError("escalation eps must be strictly decreasing");
    }
  }
}

namespace {

std::vector<Direction> reprobe_design(const BoundaryPoint& tau) {
  constexpr double pi = std::numbers::pi;
  return direction_lattice(
      tau, LatticeSpec{{0.0, pi / 8, -pi / 8, pi / 4, -pi / 4, 3 * pi / 8, -3 * pi / 8}, {1.0, 0.5, 0.25}});
}

GateRecord gate(std::string name, GateStatus status, double value, double threshold, std::string note) {
  return {std::move(name), status, value, threshold, std::move(note)};
}

}  // namespace

ClassificationReport classify(const AnalyticFunction& phi, const BoundaryPoint& tau, const ClassifyConfig& config) {
  config.validate();
  ClassificationReport rep;
  rep.function_name = phi.name();
  rep.is_rational = phi.is_rational();
  rep.params = phi.params();
  rep.tau = tau;

  rep.omega = estimate_omega(phi, tau, config.schedule, config.levels);
  const cd omega = rep.omega.omega;
  if (!rep.omega.converged) {
    rep.warnings.push_back("radial values do not settle monotonically below 1e-9; omega is the extrapolated tail limit");
  }
  const double omega_drift = std::abs(std::abs(omega) - 1.0);
  const bool omega_ok = std::isfinite(omega_drift) && omega_drift <= config.omega_tol &&
                        rep.omega.extrapolation_error <= config.omega_tol;
  rep.gates.push_back(gate("omega", omega_ok ? GateStatus::pass : GateStatus::fail, omega_drift, config.omega_tol,
                           omega_ok ? "|omega| = 1"
                                    : "no unimodular radial limit (extrapolation error " +
                                          num(rep.omega.extrapolation_error) + ")"));

  rep.radial = radial_evidence(phi, tau, config.schedule, config.levels);

  const std::vector<double> nt_ts = tail_of(config.nt_schedule.points(), config.nt_tail);
  const std::vector<Direction> nt_dirs = direction_lattice(tau, config.nt_lattice);
  rep.gamma_by_aperture = nt_gamma(phi, tau, config.apertures, nt_ts, nt_dirs);
  for (const auto& g : rep.gamma_by_aperture) {
    if (g.empty()) rep.warnings.push_back("cone of aperture " + num(g.aperture) + " contains no sample point");
  }

  // B gate: a finite radial Julia quotient certifies condition (A).
  bool b_pass = false;
  {
    const double thr = config.b_threshold;
    const double v = rep.radial.tail_sup;
    GateRecord g = gate("B", GateStatus::fail, v, thr, "");
    if (!omega_ok) {
      g.note = "omega gate failed";
    } else if (v < thr / 10.0) {
      g.status = GateStatus::pass;
      g.note = "radial Julia quotient tail-sup below threshold";
    } else if (rep.radial.limit_certified) {
      g.status = GateStatus::pass;
      g.note = "tail-sup above threshold; radial quotient has a certified finite limit " + num(rep.radial.limit);
      rep.warnings.push_back("B gate passed on the extrapolated radial Julia-quotient limit " +
                             num(rep.radial.limit) + " (tail-sup " + num(v) + " exceeds threshold " + num(thr) + ")");
    } else if (v <= thr * 10.0) {
      g.status = GateStatus::inconclusive;
      g.note = "radial tail-sup within 10x of threshold";
      rep.warnings.push_back("inconclusive at gate B");
    } else {
      g.note = "no finite certificate found";
    }
    b_pass = g.status == GateStatus::pass;
    rep.gates.push_back(std::move(g));
  }

  bool bplus_pass = false;
  if (b_pass) {
    try {
      rep.slope = recover_slope(phi, tau, omega, config.slope_ratios, SlopeConvention::second_over_first,
                                config.levels, config.schedule);
    } catch (const DomainError& e) {
      rep.warnings.push_back(std::string("slope recovery skipped: ") + e.what());
    }

    GateRecord g = gate("Bplus", GateStatus::fail, 0.0, config.bplus_ceiling, "");
    try {
      rep.bplus = bplus_probe(phi, tau, omega, default_direction_family(tau, config.escalation_eps),
                              config.bplus_ceiling, config.levels, config.schedule);
      rep.alpha_estimate = rep.bplus->alpha_estimate;
      double trending_peak = 0.0;
      double any_peak = 0.0;
      std::string worst_label;
      for (const auto& tr : rep.bplus->escalations) {
        const double peak = tr.ratios.empty() ? 0.0 : *std::max_element(tr.ratios.begin(), tr.ratios.end());
        any_peak = std::max(any_peak, peak);
        if (tr.trend_positive && peak > trending_peak) {
          trending_peak = peak;
          worst_label = tr.label;
        }
      }
      const double c = config.bplus_ceiling;
      if (trending_peak > 10.0 * c) {
        g.value = trending_peak;
        g.note = "escalation " + worst_label + " diverges";
      } else if (trending_peak >= c / 10.0) {
        g.value = trending_peak;
        g.status = GateStatus::inconclusive;
        g.note = "escalation " + worst_label + " grows to within 10x of the ceiling";
        rep.warnings.push_back("inconclusive at gate Bplus");
      } else {
        g.value = trending_peak > 0.0 ? trending_peak : any_peak;
        g.status = GateStatus::pass;
        g.note = "no escalation sequence diverges";
      }
    } catch (const DomainError& e) {
      g.status = GateStatus::inconclusive;
      g.note = e.what();
      rep.warnings.push_back(std::string("inconclusive at gate Bplus: ") + e.what());
    }
    bplus_pass = g.status == GateStatus::pass;
    rep.gates.push_back(std::move(g));
  } else {
    rep.gates.push_back(gate("Bplus", GateStatus::skipped, 0.0, config.bplus_ceiling, "B gate not passed"));
  }

  bool c_pass = false;
  if (bplus_pass) {
    const double thr = config.c_tol;
    const double slope_scale = std::max(1.0, rep.alpha_estimate);
    GateRecord g = gate("C", GateStatus::fail, 0.0, thr, "");
    try {
      rep.c = c_probe(phi, tau, omega, default_c_design(tau), config.levels, config.schedule);
      rep.lambda = rep.c->lambda;
      rep.beta_residual = rep.c->beta_residual;
      // Relative to the size of the derivative: beta scales with phi's slope.
      g.value = rep.beta_residual / slope_scale;
      if (g.value < thr / 10.0) {
        g.status = GateStatus::pass;
        g.note = "directional derivative is linear";
      } else if (g.value <= thr * 10.0) {
        g.status = GateStatus::inconclusive;
        g.note = "linearity residual within 10x of tolerance";
        rep.warnings.push_back("inconclusive at gate C");
      } else {
        g.note = "directional derivative is not linear";
      }
    } catch (const DomainError& e) {
      g.status = GateStatus::inconclusive;
      g.note = e.what();
      rep.warnings.push_back(std::string("inconclusive at gate C: ") + e.what());
    }
    c_pass = g.status == GateStatus::pass;
    rep.gates.push_back(std::move(g));

    if (rep.is_rational) {
      RationalReprobe rp;
      rp.threshold = thr / 10.0;
      try {
        const CProbe tight = c_probe(phi, tau, omega, reprobe_design(tau), config.levels + 2, config.schedule);
        rp.beta_residual = tight.beta_residual;
        rp.passed = tight.beta_residual / slope_scale < rp.threshold;
      } catch (const DomainError& e) {
        rp.beta_residual = kNaN;
        rep.warnings.push_back(std::string("rational C re-probe failed to run: ") + e.what());
      }
      if (rp.passed && !c_pass) {
        rep.warnings.push_back("rational function at a B+ point: tightened C re-probe passes (residual " +
                               num(rp.beta_residual) + ") but the C gate did not; verdict left at Bplus");
      } else if (!rp.passed && c_pass) {
        rep.warnings.push_back("tightened C re-probe residual " + num(rp.beta_residual) +
                               " exceeds " + num(rp.threshold) + " although the C gate passed");
      } else if (!rp.passed) {
        rep.warnings.push_back("rational function at a B+ point fails the C re-probe (residual " +
                               num(rp.beta_residual) + "); a rational B+ point should be a C point");
      }
      rep.rational_reprobe = rp;
    }
  } else {
    rep.gates.push_back(gate("C", GateStatus::skipped, 0.0, config.c_tol, "Bplus gate not passed"));
  }

  rep.verdict = c_pass ? Verdict::C : bplus_pass ? Verdict::Bplus : b_pass ? Verdict::B : Verdict::none;
  return rep;
}

EscalationDiagnostic escalation_diagnostic(const std::function<AnalyticFunction(int)>& family,
                                           std::span<const int> ns, const BoundaryPoint& tau,
                                           const ClassifyConfig& config) {
  EscalationDiagnostic out;
  const DirectionFamily bulk{direction_lattice(tau, bulk_lattice()), {}, {}};
  for (int n : ns) {
    const AnalyticFunction f = family(n);
    const OmegaEstimate om = estimate_omega(f, tau, config.schedule, config.levels);
    const RadialEvidence ev = radial_evidence(f, tau, config.schedule, config.levels);
    const BPlusProbe bp =
        bplus_probe(f, tau, om.omega, bulk, config.bplus_ceiling, config.levels, config.schedule);
    out.steps.push_back({n, ev.limit_certified ? ev.limit : ev.tail_sup, bp.alpha_estimate});
  }
  out.geometric = out.steps.size() >= 2;
  for (std::size_t k = 1; k < out.steps.size(); ++k) {
    if (!(out.steps[k].gamma >= 2.0 * out.steps[k - 1].gamma && out.steps[k].alpha >= 2.0 * out.steps[k - 1].alpha)) {
      out.geometric = false;
    }
  }
  return out;
}

}  // namespace bidisk
