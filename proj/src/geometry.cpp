#include "bidisk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

void require_interior(const Point2& z, const char* what) {
  if (!z.is_interior()) {
    throw DomainError(std::string(what) + ": point is not in the open bidisk");
  }
}

double halton(std::size_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace

BoundaryPoint::BoundaryPoint(cd tau1, cd tau2) : tau1_(tau1), tau2_(tau2) {
  if (std::abs(std::abs(tau1) - 1.0) > 1e-12 || std::abs(std::abs(tau2) - 1.0) > 1e-12) {
    throw DomainError("boundary point must lie on the torus |tau1| = |tau2| = 1");
  }
}

Direction Direction::from_local(const BoundaryPoint& tau, cd u1, cd u2) {
  return {tau.tau1() * u1, tau.tau2() * u2};
}

bool Direction::is_inward(const BoundaryPoint& tau) const {
  return std::real(std::conj(tau.tau1()) * h1) < 0.0 && std::real(std::conj(tau.tau2()) * h2) < 0.0;
}

double Direction::max_inward_step(const BoundaryPoint& tau) const {
  if (!is_inward(tau)) return 0.0;
  // |tau + t h|^2 = 1 + 2t Re(conj(tau) h) + t^2 |h|^2 < 1
  const double t1 = -2.0 * std::real(std::conj(tau.tau1()) * h1) / std::norm(h1);
  const double t2 = -2.0 * std::real(std::conj(tau.tau2()) * h2) / std::norm(h2);
  return std::min(t1, t2);
}

double Direction::limiting_aperture(const BoundaryPoint& tau) const {
  if (!is_inward(tau)) return std::numeric_limits<double>::infinity();
  const double g1 = -std::real(std::conj(tau.tau1()) * h1);
  const double g2 = -std::real(std::conj(tau.tau2()) * h2);
  return norm / std::min(g1, g2);
}

NontangentialCone::NontangentialCone(BoundaryPoint apex_, double aperture_, double radius_)
    : apex(apex_), aperture(aperture_), radius(radius_) {
  if (!(aperture > 0.0)) throw ConfigError("cone aperture must be positive");
  if (!(radius > 0.0 && radius <= 1.0)) throw ConfigError("cone radius must lie in (0, 1]");
}

bool NontangentialCone::contains(const Point2& z) const {
  if (!z.is_interior()) return false;
  return dist_to(z, apex) <= aperture * dist_point_to_boundary(z);
}

double dist_point_to_boundary(const Point2& z) {
  require_interior(z, "dist_point_to_boundary");
  return std::min(1.0 - std::abs(z.z1), 1.0 - std::abs(z.z2));
}

double dist_to(const Point2& z, const BoundaryPoint& tau) {
  return std::max(std::abs(z.z1 - tau.tau1()), std::abs(z.z2 - tau.tau2()));
}

double aperture_of(const Point2& z, const BoundaryPoint& tau) {
  require_interior(z, "aperture_of");
  return dist_to(z, tau) / dist_point_to_boundary(z);
}

ConeGrid cone_grid(const NontangentialCone& cone, std::span<const double> t_schedule,
                   std::span<const Direction> directions) {
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    const double t = t_schedule[k];
    if (!(t > 0.0 && t <= cone.radius)) throw ConfigError("schedule entries must lie in (0, radius]");
    if (k > 0 && !(t < t_schedule[k - 1])) throw ConfigError("schedule must be strictly decreasing");
  }
  ConeGrid grid;
  const double limit = 1.0 - kInteriorMargin;
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    for (std::size_t d = 0; d < directions.size(); ++d) {
      const Point2 z = directions[d].at(cone.apex, t_schedule[k]);
      if (!(std::abs(z.z1) < limit && std::abs(z.z2) < limit)) continue;
      const double ap = aperture_of(z, cone.apex);
      if (ap <= cone.aperture) grid.samples.push_back({z, t_schedule[k], k, d, ap});
    }
  }
  return grid;
}

std::vector<double> ScheduleSpec::points() const {
  if (!(radius > 0.0 && radius <= 1.0)) throw ConfigError("schedule radius must lie in (0, 1]");
  if (!(ratio > 1.0)) throw ConfigError("schedule ratio must exceed 1");
  if (depth < 1) throw ConfigError("schedule depth must be positive");
  std::vector<double> t(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) t[static_cast<std::size_t>(k - 1)] = radius * std::pow(ratio, -k);
  return t;
}

LatticeSpec LatticeSpec::aperture_octaves(int octaves, int steps_per_octave, std::vector<double> ratios) {
  LatticeSpec spec;
  spec.angles.push_back(0.0);
  for (int k = 1; k <= octaves * steps_per_octave; ++k) {
    const double theta = std::acos(std::exp2(-static_cast<double>(k) / steps_per_octave));
    spec.angles.push_back(theta);
    spec.angles.push_back(-theta);
  }
  spec.ratios = std::move(ratios);
  return spec;
}

std::vector<Direction> direction_lattice(const BoundaryPoint& tau, const LatticeSpec& spec) {
  for (double a : spec.angles) {
    if (!(std::abs(a) < std::numbers::pi / 2)) throw ConfigError("lattice angles must lie in (-pi/2, pi/2)");
  }
  for (double r : spec.ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("lattice ratios must lie in (0, 1]");
  }
  std::vector<Direction> out;
  for (double a1 : spec.angles) {
    for (double a2 : spec.angles) {
      const cd e1 = -std::polar(1.0, a1);
      const cd e2 = -std::polar(1.0, a2);
      for (double r : spec.ratios) {
        out.push_back(Direction::from_local(tau, e1, r * e2));
        if (r != 1.0) out.push_back(Direction::from_local(tau, r * e1, e2));
      }
    }
  }
  return out;
}

std::vector<Point2> quasi_random_bidisk(std::size_t count, std::size_t seed) {
  std::vector<Point2> pts;
  pts.reserve(count);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 1; i <= count; ++i) {
    const std::size_t n = i + seed;
    const double r1 = std::sqrt(halton(n, 2));
    const double r2 = std::sqrt(halton(n, 3));
    pts.push_back({std::polar(r1, two_pi * halton(n, 5)), std::polar(r2, two_pi * halton(n, 7))});
  }
  return pts;
}

}  // namespace bidisk
