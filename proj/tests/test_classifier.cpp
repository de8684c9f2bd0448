#include <doctest.h>

#include <cmath>
#include <random>

#include "bidisk/classifier.hpp"
#include "bidisk/errors.hpp"
#include "oracles.hpp"

using namespace bidisk;

namespace {

const BoundaryPoint kChi = BoundaryPoint::chi();

AnalyticFunction phi(Builtin b) { return builtin(b); }

}  // namespace

TEST_CASE("Julia quotient examples") {
  CHECK(julia_quotient(phi(Builtin::phi1), {0.9, 0.9}) == doctest::Approx(1.9).epsilon(1e-13));
  for (double r : {0.5, 0.9, 0.99, 0.999999}) {
    CHECK(std::abs(julia_quotient(phi(Builtin::phi3), {r, r}) - 1.0) < 1e-9);
  }
  const auto p4 = phi(Builtin::phi4);
  for (int n = 1; n <= 20; ++n) {
    const double r = 1.0 - std::ldexp(1.0, -n);
    CHECK(julia_quotient(p4, {r, r}) == std::ldexp(1.0, n));
  }
  CHECK_THROWS_AS((void)julia_quotient(p4, {1.0, 0.0}), DomainError);
}

TEST_CASE("omega along the radial path") {
  const auto w1 = estimate_omega(phi(Builtin::phi1), kChi);
  CHECK(w1.converged);
  CHECK(std::abs(w1.omega - 1.0) < 1e-9);
  const auto w2 = estimate_omega(phi(Builtin::phi2), kChi);
  CHECK(w2.converged);
  CHECK(std::abs(w2.omega - 1.0) < 1e-9);
  const auto w3 = estimate_omega(phi(Builtin::phi3), kChi);
  CHECK(w3.converged);
  CHECK(std::abs(w3.omega + 1.0) < 1e-9);
  const auto w4 = estimate_omega(phi(Builtin::phi4), kChi);
  CHECK_FALSE(w4.converged);
}

TEST_CASE("directional derivatives at (1, 1)") {
  const Direction diag(-1.0, -1.0);
  const auto d1 = directional_derivative(phi(Builtin::phi1), kChi, 1.0, diag);
  CHECK(std::abs(d1.value + 2.0) < 1e-8);
  const auto d3 = directional_derivative(phi(Builtin::phi3), kChi, -1.0, diag);
  CHECK(std::abs(d3.value - 1.0) < 1e-8);
  const auto d2 = directional_derivative(phi(Builtin::phi2), kChi, 1.0, diag);
  CHECK(std::abs(d2.value + 4.0) < 1e-8);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Direction h(cd(-0.2 - std::abs(u(rng)), u(rng)), cd(-0.2 - std::abs(u(rng)), u(rng)));
    const auto a = directional_derivative(phi(Builtin::phi1), kChi, 1.0, h);
    CHECK(std::abs(a.value - oracle::d_phi1(h.h1, h.h2)) < 1e-7);
    const auto b = directional_derivative(phi(Builtin::phi2), kChi, 1.0, h);
    CHECK(std::abs(b.value - oracle::d_phi2(h.h1, h.h2)) < 1e-7);
    const auto c = directional_derivative(phi(Builtin::phi3), kChi, -1.0, h);
    CHECK(std::abs(c.value - oracle::d_phi3(h.h1, h.h2)) < 1e-7 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("phi4 truncation has the exact gradient") {
  const double lambda = oracle::phi4_gradient_scale(20);
  CHECK(lambda == 2097140.0);
  const Direction h(cd(-1.0, 0.3), cd(-0.5, -0.2));
  const auto d = directional_derivative(phi(Builtin::phi4), kChi, 1.0, h);
  CHECK(std::abs(d.value - lambda * (h.h1 + h.h2)) < 1e-6 * lambda);
}

TEST_CASE("directional derivative needs inward directions") {
  CHECK_THROWS_AS((void)directional_derivative(phi(Builtin::phi1), kChi, 1.0, Direction(1.0, -1.0)), DomainError);
}

TEST_CASE("B+ probe") {
  const auto chi_family = default_direction_family(kChi);
  const auto p3 = bplus_probe(phi(Builtin::phi3), kChi, -1.0, chi_family);
  CHECK(p3.diverging);
  bool found = false;
  for (const auto& tr : p3.escalations) {
    if (tr.label != "(-eps+2i, -eps-1i)") continue;
    found = true;
    for (std::size_t k = 0; k < tr.eps.size() && tr.eps[k] >= 1e-3; ++k) {
      CHECK(std::abs(tr.samples[k].value) >= 1.0 / tr.eps[k]);
      // |D| = |2/eps - 4i/3| by substitution
      const cd want = oracle::d_phi3(tr.samples[k].h.h1, tr.samples[k].h.h2);
      CHECK(std::abs(tr.samples[k].value - want) < 1e-6 * std::abs(want));
    }
  }
  CHECK(found);

  const auto p2 = bplus_probe(phi(Builtin::phi2), kChi, 1.0, chi_family);
  CHECK_FALSE(p2.diverging);
  CHECK(std::isfinite(p2.alpha_estimate));
  // brute-force bound of |h2 eta(h2/h1)| / ||h|| over the bulk
  double brute = 0.0;
  for (const auto& h : chi_family.bulk) brute = std::max(brute, std::abs(oracle::d_phi2(h.h1, h.h2)) / h.norm);
  CHECK(p2.alpha_estimate == doctest::Approx(brute).epsilon(1e-6));

  const auto p1 = bplus_probe(phi(Builtin::phi1), kChi, 1.0, chi_family);
  CHECK_FALSE(p1.diverging);
  CHECK(p1.alpha_estimate == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("C probe") {
  const auto design = default_c_design(kChi);
  const auto c1 = c_probe(phi(Builtin::phi1), kChi, 1.0, design);
  CHECK(std::abs(c1.lambda.first) < 1e-6);
  CHECK(std::abs(c1.lambda.second - 2.0) < 1e-6);
  CHECK(c1.beta_residual < 1e-6);
  const auto c2 = c_probe(phi(Builtin::phi2), kChi, 1.0, design);
  CHECK(c2.beta_residual > 0.1);

  const auto unimodular = AnalyticFunction("const", [](const Point2&) { return cd(0.0, 1.0); }, true);
  const auto c0 = c_probe(unimodular, kChi, cd(0.0, 1.0), design);
  CHECK(std::abs(c0.lambda.first) == 0.0);
  CHECK(std::abs(c0.lambda.second) == 0.0);
  CHECK(c0.beta_residual == 0.0);
}

TEST_CASE("slope recovery") {
  const cd ratios[] = {cd(1.0), cd(2.0), cd(0.5), cd(0.0, 1.0), cd(1.0, -1.0), cd(-2.0, 0.5)};
  const auto s2 = recover_slope(phi(Builtin::phi2), kChi, 1.0, ratios);
  for (const auto& s : s2.samples) {
    CHECK(s.agree);
    CHECK(std::abs(s.eta_direct - oracle::eta_lebesgue(s.w)) < 1e-6);
  }
  CHECK(std::abs(s2.samples[1].eta_direct + 4.0 * std::log(2.0)) < 1e-6);
  CHECK(std::abs(s2.samples[0].eta_direct + 4.0) < 1e-6);

  const auto s1 = recover_slope(phi(Builtin::phi1), kChi, 1.0, ratios);
  for (const auto& s : s1.samples) CHECK(std::abs(s.eta_direct + 2.0) < 1e-6);

  // the inverted ratio convention is inconsistent with the Pick-function route
  CHECK_THROWS_AS((void)recover_slope(phi(Builtin::phi2), kChi, 1.0, ratios, SlopeConvention::first_over_second),
                  NumericalFault);
}

TEST_CASE("classification of the examples") {
  const auto r1 = classify(phi(Builtin::phi1), kChi);
  CHECK(r1.verdict == Verdict::C);
  REQUIRE(r1.lambda);
  CHECK(std::abs(r1.lambda->first) < 1e-6);
  CHECK(std::abs(r1.lambda->second - 2.0) < 1e-6);
  REQUIRE(r1.rational_reprobe);
  CHECK(r1.rational_reprobe->passed);

  const auto r2 = classify(phi(Builtin::phi2), kChi);
  CHECK(r2.verdict == Verdict::Bplus);
  CHECK(r2.beta_residual > 1e-2);
  CHECK_FALSE(r2.rational_reprobe);

  const auto r3 = classify(phi(Builtin::phi3), kChi);
  CHECK(r3.verdict == Verdict::B);
  REQUIRE(r3.bplus);
  CHECK(r3.bplus->diverging);

  const auto r4 = classify(phi(Builtin::phi4), kChi);
  CHECK(r4.verdict == Verdict::C);
  CHECK_FALSE(r4.omega.converged);
}

TEST_CASE("property: the verdict never skips a gate") {
  std::vector<AnalyticFunction> fns = {phi(Builtin::phi1), phi(Builtin::phi2), phi(Builtin::phi3),
                                       builtin(Builtin::phi4, {{"N", 6}})};
  fns.push_back(from_measure_recipe(MeasureSpec::point_mass(0.0)));
  for (const auto& f : fns) {
    const auto r = classify(f, kChi);
    INFO(f.name());
    auto status = [&](const std::string& name) {
      for (const auto& g : r.gates) {
        if (g.name == name) return g.status;
      }
      return GateStatus::skipped;
    };
    const int depth = static_cast<int>(r.verdict);
    CHECK((depth >= 1) == (status("B") == GateStatus::pass));
    CHECK((depth >= 2) == (status("Bplus") == GateStatus::pass));
    CHECK((depth >= 3) == (status("C") == GateStatus::pass));
    if (depth >= 2) CHECK(status("B") == GateStatus::pass);
    if (depth >= 3) CHECK(status("Bplus") == GateStatus::pass);
    if (r.verdict != Verdict::none) CHECK(std::abs(std::abs(r.omega.omega) - 1.0) <= 1e-6);
  }
}

TEST_CASE("rotated torus points") {
  // phi(conj(tau1) z1, conj(tau2) z2) has the same regularity at tau as phi at (1, 1).
  const BoundaryPoint tau(std::polar(1.0, 0.7), std::polar(1.0, -1.9));
  const auto p2 = phi(Builtin::phi2);
  const AnalyticFunction rotated(
      "phi2-rotated", [&](const Point2& z) { return p2(std::conj(tau.tau1()) * z.z1, std::conj(tau.tau2()) * z.z2); },
      false);
  const auto r = classify(rotated, tau);
  CHECK(r.verdict == Verdict::Bplus);
}

TEST_CASE("aperture sups") {
  ClassifyConfig cfg;
  const auto tail_all = cfg.nt_schedule.points();
  const std::vector<double> tail(tail_all.end() - cfg.nt_tail, tail_all.end());
  const auto dirs = direction_lattice(kChi, cfg.nt_lattice);
  const double ms[] = {1.0, 2.0, 4.0, 8.0};
  const auto g2 = nt_gamma(phi(Builtin::phi2), kChi, ms, tail, dirs);
  for (std::size_t i = 1; i < g2.size(); ++i) CHECK(g2[i].sup > g2[i - 1].sup);

  const double one[] = {1.0};
  const auto g4 = nt_gamma(phi(Builtin::phi4), kChi, one, tail, dirs);
  CHECK(g4[0].sup >= std::ldexp(1.0, 20));

  // a brute-force sweep of the same grid gives the same sups
  const auto g1 = nt_gamma(phi(Builtin::phi1), kChi, ms, tail, dirs);
  for (const auto& ag : g1) {
    double brute = 0.0;
    for (double t : tail) {
      for (const auto& h : dirs) {
        const Point2 z = h.at(kChi, t);
        if (!z.is_interior() || dist_point_to_boundary(z) < kInteriorMargin) continue;
        if (aperture_of(z, kChi) > ag.aperture) continue;
        using cl = std::complex<long double>;
        const cl z1(z.z1.real(), z.z1.imag());
        const cl z2(z.z2.real(), z.z2.imag());
        const long double gap = std::min(1.0L - std::abs(z1), 1.0L - std::abs(z2));
        brute = std::max(brute, static_cast<double>((1.0L - std::abs(oracle::phi1(z1, z2))) / gap));
      }
    }
    CHECK(ag.sup == doctest::Approx(brute).epsilon(1e-6));
  }

  const double narrow[] = {0.5};
  CHECK(nt_gamma(phi(Builtin::phi1), kChi, narrow, tail, dirs)[0].empty());
}

TEST_CASE("property: Im f is controlled by the Julia quotient bound for phi1") {
  const auto report = classify(phi(Builtin::phi1), kChi);
  REQUIRE(report.radial.limit_certified);
  const double gamma = report.radial.limit;
  const auto f = derivative_pick(phi(Builtin::phi1), kChi, report.omega.omega);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> re(-5.0, 5.0);
  std::uniform_real_distribution<double> logim(-3.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const cd z1(re(rng), std::pow(10.0, logim(rng)));
    const cd z2(re(rng), std::pow(10.0, logim(rng)));
    CHECK(f(z1, z2).imag() <= gamma * std::max(z1.imag(), z2.imag()) + 1e-9);
  }
}

// Below the rounding floor the comparison carries no information, so eight levels
// may only exceed the four-level error up to their own floor.
TEST_CASE("property: more Richardson levels never increase the extrapolation error") {
  std::vector<std::pair<AnalyticFunction, cd>> probes = {
      {phi(Builtin::phi1), 1.0}, {phi(Builtin::phi2), 1.0}, {phi(Builtin::phi3), -1.0}};
  const Direction dirs[] = {Direction(-1.0, -1.0), Direction(cd(-1.0, 0.5), cd(-0.5, -0.5)),
                            Direction(cd(-0.3, 1.0), cd(-1.0, 0.0))};
  for (const auto& [f, omega] : probes) {
    for (const auto& h : dirs) {
      const auto four = directional_derivative(f, kChi, omega, h, 4);
      const auto eight = directional_derivative(f, kChi, omega, h, 8);
      INFO(f.name());
      CHECK(eight.extrapolation_error <= std::max(four.extrapolation_error, eight.rounding_floor));
    }
  }
}

TEST_CASE("phi4 escalation grows geometrically in the truncation") {
  const int ns[] = {5, 10, 15, 20};
  const auto diag = escalation_diagnostic(
      [](int n) { return builtin(Builtin::phi4, {{"N", static_cast<double>(n)}}); }, ns, kChi);
  REQUIRE(diag.steps.size() == 4);
  CHECK(diag.geometric);
  for (std::size_t i = 1; i < diag.steps.size(); ++i) {
    CHECK(diag.steps[i].gamma >= 2.0 * diag.steps[i - 1].gamma);
    CHECK(diag.steps[i].alpha >= 2.0 * diag.steps[i - 1].alpha);
  }
}

TEST_CASE("configuration validation") {
  ClassifyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.schedule.depth = 4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.apertures = {4.0, 2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.c_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("sweeps") {
  const auto t = ScheduleSpec{1.0, 2.0, 10}.points();
  const Direction radial[] = {Direction(-1.0, -1.0)};
  const auto rows = julia_sweep(phi(Builtin::phi1), kChi, t, radial);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) CHECK(std::abs(r.quotient - (2.0 - r.t)) < 1e-12);
  CHECK_THROWS_AS((void)julia_sweep(phi(Builtin::phi1), kChi, t, radial, 0.5), ConfigError);
}

TEST_CASE("the cut scan finds a pole off the fixed escalation patterns") {
  // phi3(m(z1), z2) with m(z) = (z - b) / (1 - b z): D = -3 k h1 h2 / (k h1 + 2 h2),
  // k = (1 + b) / (1 - b), blows up along h1 / h2 -> -2 / k instead of -2.
  const auto base = *phi(Builtin::phi3).complement();
  for (double b : {-0.4, 0.3, 0.6}) {
    const auto f = AnalyticFunction::from_complement(
        "phi3 scaled", [=](cd a1, cd a2) { return base(a1 * (1.0 + b) / ((1.0 - b) + b * a1), a2); }, true);
    const auto probe = bplus_probe(f, kChi, -1.0, default_direction_family(kChi));
    INFO(b);
    CHECK(probe.diverging);
    const auto& scan = probe.escalations.back();
    CHECK(scan.label.rfind("cut scan", 0) == 0);
    CHECK(scan.trend_positive);
    const double k = (1.0 + b) / (1.0 - b);
    const auto& h = scan.samples.back().h;
    CHECK(std::abs(h.h1 / h.h2 + 2.0 / k) < 1e-3);
    CHECK(classify(f, kChi).verdict == Verdict::B);
  }
  // a B+ point keeps its verdict: the scan stays bounded along the cut
  const auto p2 = bplus_probe(phi(Builtin::phi2), kChi, 1.0, default_direction_family(kChi));
  CHECK_FALSE(p2.escalations.back().trend_positive);
}
