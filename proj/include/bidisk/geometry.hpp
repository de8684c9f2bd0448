#pragma once

// Sup-norm geometry of the bidisk near a point of the torus.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bidisk {

using cd = std::complex<double>;

/// Points with a coordinate of modulus at least this are treated as boundary
/// points by the sampling grids (1 - |z| is unreliable beyond it).
inline constexpr double kInteriorMargin = 1e-14;

struct Point2 {
  cd z1;
  cd z2;

  [[nodiscard]] bool is_interior() const { return std::abs(z1) < 1.0 && std::abs(z2) < 1.0; }
  [[nodiscard]] double sup_norm() const { return std::max(std::abs(z1), std::abs(z2)); }
};

/// A point of the distinguished boundary T^2.
class BoundaryPoint {
 public:
  /// Throws DomainError unless both coordinates are unimodular to 1e-12.
  BoundaryPoint(cd tau1, cd tau2);

  static BoundaryPoint chi() { return {1.0, 1.0}; }

  [[nodiscard]] cd tau1() const { return tau1_; }
  [[nodiscard]] cd tau2() const { return tau2_; }

 private:
  cd tau1_;
  cd tau2_;
};

/// A direction h in C^2; `norm` is the sup norm.
struct Direction {
  cd h1;
  cd h2;
  double norm = 0.0;

  Direction() = default;
  Direction(cd a, cd b) : h1(a), h2(b), norm(std::max(std::abs(a), std::abs(b))) {}

  /// Direction tau (.) u built from coordinates local to tau.
  static Direction from_local(const BoundaryPoint& tau, cd u1, cd u2);

  /// tau + t*h stays in the open bidisk for all small t > 0, i.e.
  /// Re(conj(tau_j) h_j) < 0 for both j.
  [[nodiscard]] bool is_inward(const BoundaryPoint& tau) const;

  /// Largest t for which tau + t*h is in the open bidisk (0 if not inward).
  [[nodiscard]] double max_inward_step(const BoundaryPoint& tau) const;

  /// Aperture of the ray tau + t*h in the limit t -> 0.
  [[nodiscard]] double limiting_aperture(const BoundaryPoint& tau) const;

  [[nodiscard]] Point2 at(const BoundaryPoint& tau, double t) const {
    return {tau.tau1() + t * h1, tau.tau2() + t * h2};
  }
};

struct NontangentialCone {
  BoundaryPoint apex;
  double aperture;
  double radius;

  /// Throws ConfigError for aperture <= 0 or radius outside (0, 1].
  NontangentialCone(BoundaryPoint apex, double aperture, double radius = 1.0);

  /// dist(z, apex) <= aperture * dist(z, boundary), for interior z.
  [[nodiscard]] bool contains(const Point2& z) const;
};

/// min(1 - |z1|, 1 - |z2|). Throws DomainError for non-interior z.
double dist_point_to_boundary(const Point2& z);

/// Sup-norm distance max(|z1 - tau1|, |z2 - tau2|).
double dist_to(const Point2& z, const BoundaryPoint& tau);

/// Pointwise aperture dist(z, tau) / dist(z, boundary). Throws DomainError for non-interior z.
double aperture_of(const Point2& z, const BoundaryPoint& tau);

struct ConeSample {
  Point2 z;
  double t = 0.0;
  std::size_t t_index = 0;
  std::size_t direction_index = 0;
  double aperture = 0.0;
};

struct ConeGrid {
  std::vector<ConeSample> samples;

  /// No scheduled point fell inside the cone; callers must surface this.
  [[nodiscard]] bool empty() const { return samples.empty(); }
};

/// All points apex + t*h (t from the schedule, h from the directions) that are
/// interior, at least kInteriorMargin away from the boundary and inside the cone.
/// Samples are ordered by (t index, direction index).
/// Throws ConfigError if the schedule is not strictly decreasing in (0, radius].
ConeGrid cone_grid(const NontangentialCone& cone, std::span<const double> t_schedule,
                   std::span<const Direction> directions);

/// Geometric approach schedule t_k = radius * ratio^-k, k = 1..depth.
struct ScheduleSpec {
  double radius = 1.0;
  double ratio = 2.0;
  int depth = 40;

  [[nodiscard]] std::vector<double> points() const;
};

/// Lattice of inward unit directions at tau. In coordinates local to tau a
/// direction is u = (-rho1 e^{i theta1}, -rho2 e^{i theta2}) with
/// max(rho1, rho2) = 1; the angles and the smaller modulus come from the lists.
struct LatticeSpec {
  std::vector<double> angles;
  std::vector<double> ratios;

  /// Angles 0 and +-arccos(2^{-k/steps}) for k = 1..steps*octaves, so that the
  /// limiting apertures of the lattice cover [1, 2^octaves] geometrically.
  static LatticeSpec aperture_octaves(int octaves, int steps_per_octave,
                                      std::vector<double> ratios = {1.0, 0.5, 0.25});
};

std::vector<Direction> direction_lattice(const BoundaryPoint& tau, const LatticeSpec& spec);

/// Deterministic low-discrepancy points of the open bidisk (Halton, bases 2,3,5,7).
/// `seed` offsets the sequence index.
std::vector<Point2> quasi_random_bidisk(std::size_t count, std::size_t seed = 0);

}  // namespace bidisk
