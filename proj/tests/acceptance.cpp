// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
// Exit status is 0 when every line was produced (a FAIL is a finding, not a crash).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bidisk/classifier.hpp"
#include "bidisk/cli.hpp"
#include "bidisk/pick.hpp"
#include "oracles.hpp"
#include "test_measures.hpp"

using namespace bidisk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

cd random_pi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> arg(1e-3, std::numbers::pi - 1e-3);
  std::uniform_real_distribution<double> logmod(-2.0, 2.0);
  return std::polar(std::pow(10.0, logmod(rng)), arg(rng));
}

const BoundaryPoint kChi = BoundaryPoint::chi();

// 1. The four worked examples.
void gallery(Outcome& o) {
  std::vector<std::string> slow;
  auto timed = [&](const std::string& name, const std::function<void()>& body) {
    const auto start = Clock::now();
    body();
    const double s = seconds_since(start);
    o.detail << " " << name << " " << fmt(s) << "s;";
    if (s > 1.0) slow.push_back(name);
  };

  timed("phi1", [&] {
    const auto phi = builtin(Builtin::phi1);
    const auto r = classify(phi, kChi);
    o.require(r.verdict == Verdict::C, "phi1 verdict " + to_string(r.verdict));
    o.require(r.lambda && std::abs(r.lambda->first) < 1e-6 && std::abs(r.lambda->second - 2.0) < 1e-6,
              "phi1 lambda");
    double worst = 0.0;
    for (double rr : {0.1, 0.5, 0.9, 0.99, 0.999, 0.9999}) worst = std::max(worst, std::abs(julia_quotient(phi, {rr, rr}) - (1.0 + rr)));
    o.require(worst <= 1e-12, "phi1 radial quotient off by " + fmt(worst));
  });

  timed("phi2", [&] {
    const auto phi = builtin(Builtin::phi2);
    const auto r = classify(phi, kChi);
    o.require(r.verdict == Verdict::Bplus, "phi2 verdict " + to_string(r.verdict));
    // diagonal restriction (2 - 5t) / (2 + 3t) has slope (-5 * 2 - 3 * 2) / 2^2 at t = 0
    const double want_d = (-5.0 * 2.0 - 3.0 * 2.0) / 4.0;
    const auto d = directional_derivative(phi, kChi, r.omega.omega, Direction(-1.0, -1.0));
    o.require(std::abs(d.value - want_d) < 1e-6, "phi2 D[(-1,-1)] = " + fmt(d.value.real()));
    const cd ratios[] = {cd(2.0)};
    const auto s = recover_slope(phi, kChi, r.omega.omega, ratios);
    const cd want_eta = oracle::eta_lebesgue(2.0);
    o.require(std::abs(s.samples[0].eta_direct - want_eta) < 1e-6, "phi2 eta(2)");
    o.require(r.beta_residual > 1e-2, "phi2 c_probe residual " + fmt(r.beta_residual));
  });

  timed("phi3", [&] {
    const auto phi = builtin(Builtin::phi3);
    const auto r = classify(phi, kChi);
    o.require(r.verdict == Verdict::B, "phi3 verdict " + to_string(r.verdict));
    double worst = 0.0;
    for (double rr : {0.1, 0.5, 0.9, 0.99, 0.999, 0.9999}) worst = std::max(worst, std::abs(julia_quotient(phi, {rr, rr}) - 1.0));
    o.require(worst <= 1e-12, "phi3 radial quotient off by " + fmt(worst));
    const auto probe =
        bplus_probe(phi, kChi, r.omega.omega, default_direction_family(kChi, {1e-1, 1e-2, 1e-3}));
    bool found = false;
    for (const auto& tr : probe.escalations) {
      if (tr.label != "(-eps+2i, -eps-1i)") continue;
      found = true;
      for (std::size_t k = 0; k < tr.eps.size(); ++k) {
        o.require(std::abs(tr.samples[k].value) >= 1.0 / tr.eps[k], "phi3 |D| < 1/eps at eps " + fmt(tr.eps[k]));
      }
    }
    o.require(found, "phi3 escalation sequence missing");
  });

  timed("phi4", [&] {
    const auto phi = builtin(Builtin::phi4, {{"N", 20}});
    o.require(!estimate_omega(phi, kChi).converged, "phi4 omega converged");
    for (int n = 1; n <= 20; ++n) {
      const double rr = 1.0 - std::ldexp(1.0, -n);
      const double q = julia_quotient(phi, {rr, rr});
      if (q != std::ldexp(1.0, n)) o.require(false, "phi4 quotient at n = " + std::to_string(n) + " is " + fmt(q));
    }
  });
  o.require(slow.empty(), "an example took longer than 1 s");
}

// 2. Direct integral against the resolved form.
void representation(Outcome& o) {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (const auto& [name, mu] : test_measures()) {
    const auto f = f_from_measure(mu);
    for (int i = 0; i < 1000; ++i) {
      const cd z1 = random_pi(rng);
      const cd z2 = random_pi(rng);
      const cd a = f(z1, z2);
      worst = std::max(worst, std::abs(a - resolved_eval(f, z1, z2)) / std::abs(a));
    }
  }
  const double s = seconds_since(start);
  o.detail << " worst relative difference " << fmt(worst) << ", " << fmt(s) << "s";
  o.require(worst < 1e-8, "agreement");
  o.require(s < 5.0, "runtime");
}

// 3. Pick property of f, and of eta and -w eta.
void pick(Outcome& o) {
  std::mt19937_64 rng(102);
  double min_f = INFINITY;
  double min_eta = INFINITY;
  for (const auto& [name, mu] : test_measures()) {
    const auto f = f_from_measure(mu);
    const auto eta = eta_from_measure(mu);
    for (int i = 0; i < 10000; ++i) min_f = std::min(min_f, f(random_pi(rng), random_pi(rng)).imag());
    for (int i = 0; i < 1000; ++i) {
      const cd w = random_pi(rng);
      const cd e = eta(w);
      min_eta = std::min({min_eta, e.imag(), (-w * e).imag()});
    }
  }
  o.detail << " min Im f " << fmt(min_f) << ", min Im of eta and -w eta " << fmt(min_eta);
  o.require(min_f >= -1e-12, "Im f");
  o.require(min_eta >= -1e-12, "Im eta");
}

// 4. Roundtrip and s-independence.
void roundtrip(Outcome& o) {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  double worst_s = 0.0;
  for (const auto& [name, mu] : test_measures()) {
    const auto eta = eta_from_measure(mu);
    const auto back = f_to_eta(eta_to_f(eta));
    const auto f = f_from_measure(mu);
    for (int i = 0; i < 50; ++i) {
      const cd w = random_pi(rng);
      worst = std::max(worst, std::abs(back(w) - eta(w)) / std::max(1.0, std::abs(eta(w))));
      const auto [lo, hi] = admissible_s(w);
      const double s1 = lo + 0.3 * (hi - lo);
      const double s2 = lo + 0.7 * (hi - lo);
      const cd a = eta_from_f_at(f, w, s1);
      worst_s = std::max(worst_s, std::abs(a - eta_from_f_at(f, w, s2)) / std::max(1.0, std::abs(a)));
    }
  }
  o.detail << " roundtrip " << fmt(worst) << ", s-dependence " << fmt(worst_s);
  o.require(worst <= 1e-9, "roundtrip");
  o.require(worst_s <= 1e-10, "s-independence");
}

// 5. Linear exactly for endpoint atoms.
void linearity(Outcome& o) {
  const std::vector<MeasureSpec> endpoint = {MeasureSpec::point_mass(1.0), MeasureSpec::point_mass(-1.0),
                                             MeasureSpec({{-1.0, 0.3}, {1.0, 1.7}}, std::nullopt)};
  double worst = 0.0;
  for (const auto& mu : endpoint) {
    const auto r = linearity_test(f_from_measure(mu));
    o.require(r.is_linear, "endpoint atoms not linear");
    worst = std::max(worst, r.residual);
  }
  const double leb = linearity_test(f_from_measure(MeasureSpec::lebesgue())).residual;
  o.detail << " endpoint-atom residual " << fmt(worst) << ", Lebesgue residual " << fmt(leb);
  o.require(worst < 1e-10, "endpoint residual");
  o.require(leb > 1e-3, "Lebesgue residual");
}

// 6. gamma_by_aperture of the classification report, over the default apertures
// M = 1, 2, 4, 8, 16.
void gamma_by_aperture(Outcome& o) {
  auto sups = [&](Builtin b) {
    std::vector<double> out;
    for (const auto& g : classify(builtin(b), kChi).gamma_by_aperture) out.push_back(g.sup);
    return out;
  };
  auto show = [&](const char* name, const std::vector<double>& g) {
    o.detail << " " << name << ":";
    for (double v : g) o.detail << " " << fmt(v);
    o.detail << ";";
  };
  const auto g1 = sups(Builtin::phi1);
  const auto g2 = sups(Builtin::phi2);
  const double spread = *std::max_element(g1.begin(), g1.end()) / *std::min_element(g1.begin(), g1.end());
  bool increasing = true;
  for (std::size_t i = 1; i < g2.size(); ++i) increasing = increasing && g2[i] > g2[i - 1];
  show("phi1", g1);
  show("phi2", g2);
  o.detail << " phi1 max/min " << fmt(spread);
  o.require(g1.size() == 5 && g2.size() == 5, "aperture set");
  o.require(spread < 2.0, "phi1 varies by 2x or more");
  o.require(increasing, "phi2 not strictly increasing");
}

// 7. Random rational Schur functions singular at a torus point.
//
// Each candidate is m_c(base(m_b1(u1), m_b2(u2))) with u = conj(tau) z, base one of
// the rational examples phi1 (a C point at (1, 1)) or phi3 (a B point only), and
// m_x(z) = (z - x) / (1 - x z) a real disk automorphism fixing 1. Those reaching a
// B+ verdict are the ones the re-probe applies to.
AnalyticFunction random_rational(std::mt19937_64& rng, BoundaryPoint& tau, std::string& label) {
  std::uniform_real_distribution<double> real(-0.6, 0.6);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const double b1 = real(rng);
  const double b2 = real(rng);
  const double c = real(rng);
  const bool use_phi1 = std::bernoulli_distribution(0.7)(rng);
  const bool rotate = std::bernoulli_distribution(0.5)(rng);
  tau = rotate ? BoundaryPoint(std::polar(1.0, angle(rng)), std::polar(1.0, angle(rng))) : kChi;
  const auto base = builtin(use_phi1 ? Builtin::phi1 : Builtin::phi3);
  const auto base_c = *base.complement();
  // 1 - m_b(1 - a), kept in relative precision for small a
  auto inner = [](cd a, double b) { return a * (1.0 + b) / ((1.0 - b) + b * a); };
  auto outer = [c](cd v) { return (v - c) / (1.0 - c * v); };
  auto comp = [=](cd a1, cd a2) { return outer(base_c(inner(a1, b1), inner(a2, b2))); };
  label = std::string(use_phi1 ? "phi1" : "phi3") + (rotate ? " rotated" : "") + " b=(" + fmt(b1) + "," + fmt(b2) +
          ") c=" + fmt(c);
  if (!rotate) return AnalyticFunction::from_complement(label, comp, true);
  const cd t1 = std::conj(tau.tau1());
  const cd t2 = std::conj(tau.tau2());
  return AnalyticFunction(label, [=](const Point2& z) { return comp(1.0 - t1 * z.z1, 1.0 - t2 * z.z2); }, true);
}

void rational_reprobe(Outcome& o) {
  const auto start = Clock::now();
  std::mt19937_64 rng(104);
  int accepted = 0;
  int tried = 0;
  double worst = 0.0;
  while (accepted < 5 && tried < 40) {
    ++tried;
    BoundaryPoint tau = kChi;
    std::string label;
    const auto phi = random_rational(rng, tau, label);
    const auto r = classify(phi, tau);
    if (r.verdict != Verdict::Bplus && r.verdict != Verdict::C) continue;
    ++accepted;
    const bool ok = r.rational_reprobe && r.rational_reprobe->passed && r.rational_reprobe->beta_residual < 1e-4;
    const double res = r.rational_reprobe ? r.rational_reprobe->beta_residual : NAN;
    worst = std::max(worst, res);
    o.detail << " {" << label << ": " << to_string(r.verdict) << ", residual " << fmt(res) << "}";
    o.require(ok, "re-probe for " + label);
  }
  const double s = seconds_since(start);
  o.detail << " " << accepted << " of " << tried << " candidates reached B+, " << fmt(s) << "s";
  o.require(accepted == 5, "fewer than 5 B+ candidates");
  o.require(s < 30.0, "runtime");
}

// 8. Directional-derivative route against the Pick-function route.
void dual_route(Outcome& o) {
  const cd ratios[] = {cd(1.0),       cd(2.0),      cd(0.5),        cd(0.0, 1.0), cd(1.0, -1.0),
                       cd(-2.0, 0.5), cd(3.0, 2.0), cd(0.1, -0.05), cd(-1.0, -1.0), cd(10.0, 0.0)};
  double worst = 0.0;
  for (auto b : {Builtin::phi1, Builtin::phi2}) {
    const auto phi = builtin(b);
    const cd omega = estimate_omega(phi, kChi).omega;
    try {
      const auto s = recover_slope(phi, kChi, omega, ratios);
      for (const auto& x : s.samples) {
        const double bound = 10.0 * (x.error_direct + x.error_pick);
        const double gap = std::abs(x.eta_direct - x.eta_pick);
        worst = std::max(worst, bound > 0.0 ? gap / bound : (gap == 0.0 ? 0.0 : INFINITY));
        o.require(gap <= bound, to_string(b) + " at w = " + fmt(x.w.real()) + "+" + fmt(x.w.imag()) + "i");
      }
    } catch (const std::exception& e) {
      o.require(false, to_string(b) + ": " + e.what());
    }
  }
  o.detail << " worst gap / (10 x extrapolation error) " << fmt(worst);
}

// 9. The CLI report does not depend on the run.
void determinism(Outcome& o) {
  const auto a = cli::run({"classify", "--builtin", "phi2"});
  const auto b = cli::run({"classify", "--builtin", "phi2"});
  o.detail << " " << a.out.size() << " bytes";
  o.require(a.exit_code == 0 && b.exit_code == 0, "exit code");
  o.require(a.out == b.out, "outputs differ");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"example gallery", gallery},
      {"representation equivalence", representation},
      {"Pick property", pick},
      {"eta/f roundtrip and s-independence", roundtrip},
      {"linearity dichotomy", linearity},
      {"Julia quotient sup by aperture", gamma_by_aperture},
      {"rational B+ points re-probe as C", rational_reprobe},
      {"dual-route derivative consistency", dual_route},
      {"determinism", determinism},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    passed += o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ":" << o.detail.str()
              << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return 0;
}
