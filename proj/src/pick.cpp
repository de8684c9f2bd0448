#include "bidisk/pick.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kPi = std::numbers::pi;

const ResolvedForm& require_resolved(const HomogeneousPick& hp, const char* what) {
  if (!hp.resolved()) {
    throw std::invalid_argument(std::string(what) + ": Pick function has no resolved form");
  }
  return *hp.resolved();
}

}  // namespace

cd SlopeFunction::operator()(cd w) const {
  if (w.imag() == 0.0 && w.real() <= 0.0) throw DomainError("slope function evaluated on the cut (-inf, 0]");
  return eval_(w);
}

cd HomogeneousPick::operator()(cd z1, cd z2) const {
  if (!in_upper_half_plane(z1) || !in_upper_half_plane(z2)) {
    throw DomainError("homogeneous Pick function evaluated outside the upper half-plane squared");
  }
  return eval_(z1, z2);
}

SlopeFunction eta_from_measure(const MeasureSpec& mu) {
  return SlopeFunction([mu](cd w) { return -4.0 * mu.reciprocal_linear(1.0 + w, w - 1.0); }, mu);
}

std::function<cd(cd)> cauchy_g(const MeasureSpec& mu) {
  return [mu](cd zeta) -> cd {
    if (zeta.imag() == 0.0 && std::abs(zeta.real()) <= 1.0) {
      throw DomainError("cauchy_g evaluated on [-1, 1]");
    }
    static constexpr double kWeight[] = {1.0, 0.0, -1.0};  // 1 - t^2
    return mu.reciprocal_linear(-zeta, 1.0, kWeight);
  };
}

HomogeneousPick f_from_measure(const MeasureSpec& mu) {
  const double m0 = moments(mu, 0);
  const double m1 = moments(mu, 1);
  ResolvedForm resolved{m0 - m1, m0 + m1, cauchy_g(mu)};
  return HomogeneousPick(
      [mu](cd z1, cd z2) { return 4.0 * z1 * z2 * mu.reciprocal_linear(z1 + z2, z1 - z2); },
      std::move(resolved), mu);
}

cd resolved_eval(const HomogeneousPick& hp, cd z1, cd z2) {
  const ResolvedForm& r = require_resolved(hp, "resolved_eval");
  if (!in_upper_half_plane(z1) || !in_upper_half_plane(z2)) {
    throw DomainError("resolved_eval outside the upper half-plane squared");
  }
  if (std::abs(z1 - z2) < kResolvedDiagonalTube * std::abs(z1)) return (r.a + r.b) * z1;
  const cd zeta = (z1 + z2) / (z2 - z1);
  return r.a * z1 + r.b * z2 + (z2 - z1) * r.g(zeta);
}

HomogeneousPick eta_to_f(SlopeFunction eta) {
  return HomogeneousPick([eta = std::move(eta)](cd z1, cd z2) -> cd {
    const cd ratio = z2 / z1;
    if (std::abs(ratio.imag()) < 1e-13) return -z2 * eta(cd(ratio.real(), 0.0));
    if (ratio.imag() > 0.0) return -z2 * eta(ratio);
    return -z2 * std::conj(eta(std::conj(ratio)));
  });
}

std::pair<double, double> admissible_s(cd w) {
  if (w == cd(0.0)) throw DomainError("f_to_eta: w = 0 is on the cut");
  const double alpha = std::arg(w);
  if (std::abs(alpha) >= kPi - 1e-12) throw DomainError("f_to_eta: w too close to the cut (-inf, 0]");
  return {std::max(0.0, -alpha), std::min(kPi, kPi - alpha)};
}

cd eta_from_f_at(const HomogeneousPick& hp, cd w, double s) {
  const cd base = -std::polar(1.0, -s);
  return std::polar(1.0, s) * hp(base / w, base);
}

SlopeFunction f_to_eta(HomogeneousPick hp) {
  return SlopeFunction([hp = std::move(hp)](cd w) -> cd {
    const auto [lo, hi] = admissible_s(w);
    const cd centre = eta_from_f_at(hp, w, 0.5 * (lo + hi));
    const cd quarter = eta_from_f_at(hp, w, lo + 0.25 * (hi - lo));
    if (std::abs(centre - quarter) > 1e-10 * std::max(1.0, std::abs(centre))) {
      throw NumericalFault("f_to_eta: value depends on the rotation parameter s (f not homogeneous?)");
    }
    return centre;
  });
}

GBoundProbe g_bound_probe(const HomogeneousPick& hp) {
  const ResolvedForm& r = require_resolved(hp, "g_bound_probe");
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-1.0 + i / 200.0);
  if (hp.source()) {
    for (const Atom& a : hp.source()->atoms()) xs.push_back(a.t);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  GBoundProbe probe;
  double best = -1.0;
  auto visit = [&](cd zeta, double& shell_sup) {
    const double v = std::abs(r.g(zeta));
    shell_sup = std::max(shell_sup, v);
    if (v > best) {
      best = v;
      probe.witness = zeta;
    }
  };
  // g(conj zeta) = conj g(zeta), so the upper half of each shell suffices.
  for (int k = 1; k <= 8; ++k) {
    const double d = std::pow(10.0, -k);
    double sup = 0.0;
    for (double x : xs) visit(cd(x, d), sup);
    for (int j = 0; j <= 8; ++j) {
      const double theta = 0.5 * kPi * j / 8.0;
      visit(1.0 + std::polar(d, theta), sup);
      visit(-1.0 + std::polar(d, kPi - theta), sup);
    }
    probe.shell_distances.push_back(d);
    probe.shell_sups.push_back(sup);
  }
  double far = 0.0;
  for (int j = 0; j < 32; ++j) visit(std::polar(1e3, kPi * (j + 0.5) / 32.0), far);
  probe.shell_distances.push_back(1e3);
  probe.shell_sups.push_back(far);

  probe.bounded = true;
  for (std::size_t k = 1; k < 8; ++k) {
    const double prev = probe.shell_sups[k - 1];
    const double cur = probe.shell_sups[k];
    if (cur == 0.0) continue;
    if (prev == 0.0 || cur / prev >= 1.5) probe.bounded = false;
  }
  probe.bound_estimate = std::max(best, 0.0);
  return probe;
}

LinearFit fit_linear2(std::span<const cd> x1, std::span<const cd> x2, std::span<const cd> values) {
  if (x1.size() != x2.size() || x1.size() != values.size() || x1.empty()) {
    throw std::invalid_argument("fit_linear2: sample arrays must be non-empty and equal in length");
  }
  double s11 = 0.0;
  double s22 = 0.0;
  cd s12 = 0.0;
  cd r1 = 0.0;
  cd r2 = 0.0;
  for (std::size_t k = 0; k < x1.size(); ++k) {
    s11 += std::norm(x1[k]);
    s22 += std::norm(x2[k]);
    s12 += std::conj(x1[k]) * x2[k];
    r1 += std::conj(x1[k]) * values[k];
    r2 += std::conj(x2[k]) * values[k];
  }
  const double det = s11 * s22 - std::norm(s12);
  if (!(det > 1e-14 * s11 * s22)) throw std::invalid_argument("fit_linear2: degenerate design");
  LinearFit fit;
  fit.lambda.first = (s22 * r1 - s12 * r2) / det;
  fit.lambda.second = (s11 * r2 - std::conj(s12) * r1) / det;
  for (std::size_t k = 0; k < x1.size(); ++k) {
    const cd res = values[k] - fit.lambda.first * x1[k] - fit.lambda.second * x2[k];
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(res));
  }
  return fit;
}

std::vector<std::pair<cd, cd>> linearity_design() {
  std::vector<std::pair<cd, cd>> design;
  for (int j = 0; j < 8; ++j) {
    for (int k = 0; k < 8; ++k) {
      const double m2 = 1.0 + 0.5 * ((j + k) % 2);
      design.emplace_back(std::polar(1.0, kPi * (j + 0.5) / 8.0), std::polar(m2, kPi * (k + 0.5) / 8.0));
    }
  }
  return design;
}

LinearityResult linearity_test(const HomogeneousPick& hp, double tol) {
  const auto design = linearity_design();
  std::vector<cd> x1;
  std::vector<cd> x2;
  std::vector<cd> values;
  double fmax = 0.0;
  for (const auto& [z1, z2] : design) {
    x1.push_back(z1);
    x2.push_back(z2);
    values.push_back(hp(z1, z2));
    fmax = std::max(fmax, std::abs(values.back()));
  }
  LinearityResult result;
  if (fmax == 0.0) {
    result.is_linear = true;
    result.lambda = {0.0, 0.0};
    result.residual = 0.0;
  } else {
    const LinearFit fit = fit_linear2(x1, x2, values);
    result.lambda = fit.lambda;
    result.residual = fit.max_abs_residual / fmax;
    result.is_linear = result.residual < tol;
  }
  if (hp.resolved()) {
    const ResolvedForm& r = *hp.resolved();
    const double mismatch = std::abs(result.lambda.first - r.a) + std::abs(result.lambda.second - r.b);
    result.matches_moments = mismatch <= 1e-8 * std::max(1.0, r.a + r.b);
  }
  return result;
}

}  // namespace bidisk
