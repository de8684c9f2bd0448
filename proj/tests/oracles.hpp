#pragma once

// Closed forms used as independent references. Nothing here calls the library.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cd = std::complex<double>;

// The four example functions written exactly as displayed, in z1, z2. Near (1, 1)
// these forms cancel badly; evaluate them in long double there.
template <class C>
C phi1(C z1, C z2) {
  using R = typename C::value_type;
  return (R(-4) * z1 * z2 * z2 + z2 * z2 + R(3) * z1 * z2 - z1 + z2) / (z2 * z2 - z1 * z2 - z1 - R(3) * z2 + R(4));
}

inline cd phi2(cd z1, cd z2) {
  const cd l = std::log((1.0 + z2) / (1.0 - z2) * ((1.0 - z1) / (1.0 + z1)));
  const cd m = 2.0 * (1.0 - z1) * (1.0 - z2) * l;
  return ((z2 - z1) - m) / ((z2 - z1) + m);
}

inline cd phi2_diagonal(cd z) { return (-3.0 + 5.0 * z) / (5.0 - 3.0 * z); }

template <class C>
C phi3(C z1, C z2) {
  using R = typename C::value_type;
  return (R(3) * z1 * z2 - R(2) * z1 - z2) / (R(3) - z1 - R(2) * z2);
}

inline cd phi4(cd z1, cd z2, int n_terms) {
  cd p = 1.0;
  for (int n = 1; n <= n_terms; ++n) {
    const double r = 1.0 - std::ldexp(1.0, -n);
    p *= (2.0 * r - z1 - z2) / (2.0 - r * (z1 + z2));
  }
  return p;
}

// Directional derivatives at (1, 1).
inline cd d_phi1(cd, cd h2) { return 2.0 * h2; }
inline cd d_phi3(cd h1, cd h2) { return -3.0 * h1 * h2 / (h1 + 2.0 * h2); }

// Slope function of Lebesgue measure, eta(w) = -4 log(w) / (w - 1), eta(1) = -4.
inline cd eta_lebesgue(cd w) {
  if (std::abs(w - 1.0) < 1e-12) return -4.0;
  return -4.0 * std::log(w) / (w - 1.0);
}

inline cd d_phi2(cd h1, cd h2) { return -h2 * eta_lebesgue(h2 / h1); }

// Lebesgue f off the diagonal and on it (+4z, not the printed -4z1).
inline cd f_lebesgue(cd z1, cd z2) {
  if (z1 == z2) return 4.0 * z1;
  return -4.0 * z1 * z2 / (z2 - z1) * std::log(z1 / z2);
}

inline cd g_lebesgue(cd zeta) { return (1.0 - zeta * zeta) * std::log((zeta - 1.0) / (zeta + 1.0)) - 2.0 * zeta; }

inline cd eta_atom(double t0, cd w) { return -4.0 / ((1.0 - t0) + (1.0 + t0) * w); }
inline cd g_atom(double t0, cd zeta) { return (1.0 - t0 * t0) / (t0 - zeta); }

// Each factor of phi4_N equals -1 at (1, 1) with derivative -(2^n - 1/2)(h1 + h2),
// so D phi4_N(1, 1)[h] = (-1)^N lambda (h1 + h2) with lambda = sum_n (2^n - 1/2).
inline double phi4_gradient_scale(int n_terms) {
  double s = 0.0;
  for (int n = 1; n <= n_terms; ++n) s += std::ldexp(1.0, n) - 0.5;
  return s;
}

}  // namespace oracle
