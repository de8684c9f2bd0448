#include "bidisk/catalog.hpp"

#include <cmath>
#include <sstream>

namespace bidisk {

namespace {

/// log(1 + x) / x, smooth through x = 0.
cd log1p_over_x(cd x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2)));
  const cd u = 1.0 + x;
  if (u == cd(1.0)) return 1.0;
  return std::log(u) / (u - 1.0);
}

// The builtins are written in a = 1 - z1, b = 1 - z2: the rational ones have
// numerator and denominator vanishing at (1, 1), where the expanded forms lose
// all digits.
cd phi1_complement(cd a, cd b) {
  return (2.0 * a + 2.0 * b - 5.0 * a * b - 3.0 * b * b + 4.0 * a * b * b) / (2.0 * a + 2.0 * b - a * b + b * b);
}

cd phi2_diagonal(cd z) { return (-3.0 + 5.0 * z) / (5.0 - 3.0 * z); }

// With p = (1+z1)/(1-z1), q = (1+z2)/(1-z2) and L = Log q - Log p,
// phi2 = (1 - m) / (1 + m), m = 2 (1-z1)(1-z2) L / (z2 - z1).
// Near the diagonal L = log1p(x) with x = (q - p)/p, so the removable
// singularity cancels analytically.
cd phi2_complement(cd a, cd b) {
  if (a == b) return (2.0 - 5.0 * a) / (2.0 + 3.0 * a);  // phi2_diagonal(1 - a)
  const cd scale = 2.0 / (b * (2.0 - a));
  const cd x = (a - b) * scale;
  cd quotient;
  if (std::abs(x) < 0.5) {
    quotient = log1p_over_x(x) * scale;
  } else {
    quotient = (std::log((2.0 - b) / b) - std::log((2.0 - a) / a)) / (a - b);
  }
  const cd m = 2.0 * a * b * quotient;
  return (1.0 - m) / (1.0 + m);
}

double phi2_branch_phase(const Point2& z) {
  const cd p = (1.0 + z.z1) / (1.0 - z.z1);
  const cd q = (1.0 + z.z2) / (1.0 - z.z2);
  return std::arg(q) - std::arg(p);
}

cd phi3_complement(cd a, cd b) { return 3.0 * a * b / (a + 2.0 * b) - 1.0; }

Rational2 phi3_coefficients() {
  Polynomial2 numer({{0.0, -1.0}, {-2.0, 3.0}});
  Polynomial2 denom({{3.0, -2.0}, {-1.0, 0.0}});
  return {numer, denom};
}

std::string describe(const Point2& z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.z1.real() << (z.z1.imag() < 0 ? "" : "+") << z.z1.imag() << "i, " << z.z2.real()
     << (z.z2.imag() < 0 ? "" : "+") << z.z2.imag() << "i)";
  return os.str();
}

cd parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex coefficients must be [re, im] pairs");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Polynomial2 parse_grid(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("coefficient grid must be an array of rows");
  std::vector<std::vector<cd>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError("coefficient grid rows must be arrays");
    std::vector<cd> r;
    for (const auto& c : row) r.push_back(parse_complex(c));
    rows.push_back(std::move(r));
  }
  return Polynomial2(std::move(rows));
}

}  // namespace

Polynomial2::Polynomial2(std::vector<std::vector<cd>> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ConfigError("polynomial needs at least one coefficient row");
}

cd Polynomial2::operator()(cd z1, cd z2) const {
  cd acc = 0.0;
  for (auto row = coeffs_.rbegin(); row != coeffs_.rend(); ++row) {
    cd inner = 0.0;
    for (auto c = row->rbegin(); c != row->rend(); ++c) inner = inner * z2 + *c;
    acc = acc * z1 + inner;
  }
  return acc;
}

Polynomial2 operator*(const Polynomial2& p, const Polynomial2& q) {
  std::size_t width_p = 0;
  std::size_t width_q = 0;
  for (const auto& r : p.coeffs_) width_p = std::max(width_p, r.size());
  for (const auto& r : q.coeffs_) width_q = std::max(width_q, r.size());
  std::vector<std::vector<cd>> out(p.coeffs_.size() + q.coeffs_.size() - 1,
                                   std::vector<cd>(width_p + width_q - 1, 0.0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < p.coeffs_[i].size(); ++j) {
      for (std::size_t k = 0; k < q.coeffs_.size(); ++k) {
        for (std::size_t l = 0; l < q.coeffs_[k].size(); ++l) {
          out[i + k][j + l] += p.coeffs_[i][j] * q.coeffs_[k][l];
        }
      }
    }
  }
  return Polynomial2(std::move(out));
}

AnalyticFunction::AnalyticFunction(std::string name, Evaluator eval, bool is_rational)
    : name_(std::move(name)), eval_(std::move(eval)), is_rational_(is_rational) {}

AnalyticFunction AnalyticFunction::from_complement(std::string name, Complement c, bool is_rational) {
  AnalyticFunction f(std::move(name), [c](const Point2& z) { return c(1.0 - z.z1, 1.0 - z.z2); }, is_rational);
  f.complement_ = std::move(c);
  return f;
}

cd AnalyticFunction::at_offset(const BoundaryPoint& tau, cd d1, cd d2) const {
  if (complement_) return (*complement_)((1.0 - tau.tau1()) - d1, (1.0 - tau.tau2()) - d2);
  return eval_({tau.tau1() + d1, tau.tau2() + d2});
}

AnalyticFunction& AnalyticFunction::with_params(std::map<std::string, double> params) {
  params_ = std::move(params);
  return *this;
}

AnalyticFunction& AnalyticFunction::with_diagonal_override(DiagonalOverride d) {
  diagonal_ = std::move(d);
  return *this;
}

AnalyticFunction& AnalyticFunction::with_rational(Rational2 r) {
  rational_ = std::move(r);
  return *this;
}

AnalyticFunction& AnalyticFunction::with_branch_phase(BranchPhase p) {
  branch_phase_ = std::move(p);
  return *this;
}

Builtin parse_builtin(const std::string& name) {
  if (name == "phi1") return Builtin::phi1;
  if (name == "phi2") return Builtin::phi2;
  if (name == "phi3") return Builtin::phi3;
  if (name == "phi4") return Builtin::phi4;
  throw ConfigError("unknown builtin '" + name + "' (expected phi1, phi2, phi3 or phi4)");
}

std::string to_string(Builtin b) {
  switch (b) {
    case Builtin::phi1: return "phi1";
    case Builtin::phi2: return "phi2";
    case Builtin::phi3: return "phi3";
    case Builtin::phi4: return "phi4";
  }
  return "?";
}

Rational2 phi1_coefficients() {
  // numer: -4 z1 z2^2 + z2^2 + 3 z1 z2 - z1 + z2
  Polynomial2 numer({{0.0, 1.0, 1.0}, {-1.0, 3.0, -4.0}});
  // denom: z2^2 - z1 z2 - z1 - 3 z2 + 4
  Polynomial2 denom({{4.0, -3.0, 1.0}, {-1.0, -1.0, 0.0}});
  return {numer, denom};
}

AnalyticFunction builtin(Builtin which, const std::map<std::string, double>& params) {
  for (const auto& [key, value] : params) {
    if (which != Builtin::phi4 || key != "N") {
      throw ConfigError("builtin " + to_string(which) + " does not take parameter '" + key + "'");
    }
    (void)value;
  }
  switch (which) {
    case Builtin::phi1: {
      auto f = AnalyticFunction::from_complement("phi1", phi1_complement, true);
      f.with_rational(phi1_coefficients());
      return f;
    }
    case Builtin::phi2: {
      auto f = AnalyticFunction::from_complement("phi2", phi2_complement, false);
      f.with_diagonal_override(phi2_diagonal).with_branch_phase(phi2_branch_phase);
      return f;
    }
    case Builtin::phi3: {
      auto f = AnalyticFunction::from_complement("phi3", phi3_complement, true);
      f.with_rational(phi3_coefficients());
      return f;
    }
    case Builtin::phi4: {
      double n_param = kDefaultPhi4Truncation;
      if (auto it = params.find("N"); it != params.end()) n_param = it->second;
      if (!(n_param >= 1.0) || n_param != std::floor(n_param) || n_param > 1000.0) {
        throw ConfigError("phi4 truncation N must be an integer in [1, 1000]");
      }
      const int n_terms = static_cast<int>(n_param);
      // Factor n is (2c - z1 - z2) / (2 - c(z1 + z2)) with c = 1 - e, e = 2^-n;
      // with s = (1 - z1) + (1 - z2) it reads (s - 2e) / (2e + c s).
      auto f = AnalyticFunction::from_complement(
          "phi4",
          [n_terms](cd a, cd b) {
            const cd s = a + b;
            cd prod = 1.0;
            for (int n = 1; n <= n_terms; ++n) {
              const double e = std::ldexp(1.0, -n);
              prod *= (s - 2.0 * e) / (2.0 * e + (1.0 - e) * s);
            }
            return prod;
          },
          true);
      f.with_params({{"N", n_param}});
      return f;
    }
  }
  throw ConfigError("unknown builtin");
}

SchurCheck schur_sample_check(const AnalyticFunction& phi, std::size_t count, std::size_t seed) {
  SchurCheck check;
  for (const Point2& z : quasi_random_bidisk(count, seed)) {
    cd v;
    try {
      v = phi(z);
    } catch (const PoleError&) {
      check.passed = false;
      check.worst = z;
      check.diagnostic = "pole at " + describe(z);
      return check;
    }
    const double m = std::abs(v);
    if (!std::isfinite(m)) {
      check.passed = false;
      check.worst = z;
      check.diagnostic = "non-finite value at " + describe(z);
      return check;
    }
    if (m > check.max_modulus) {
      check.max_modulus = m;
      check.worst = z;
    }
  }
  if (check.max_modulus > 1.0 + kSchurTolerance) {
    check.passed = false;
    std::ostringstream os;
    os.precision(17);
    os << "|value| = " << check.max_modulus << " > 1 at " << describe(check.worst);
    check.diagnostic = os.str();
  }
  return check;
}

AnalyticFunction rational(Polynomial2 numer, Polynomial2 denom, std::string name, std::size_t seed) {
  Rational2 r{numer, denom};
  AnalyticFunction f(
      std::move(name),
      [numer = std::move(numer), denom = std::move(denom)](const Point2& z) -> cd {
        const cd d = denom(z.z1, z.z2);
        if (d == cd(0.0)) throw PoleError(z, "rational function: denominator vanishes at " + describe(z));
        return numer(z.z1, z.z2) / d;
      },
      true);
  f.with_rational(std::move(r));
  const SchurCheck check = schur_sample_check(f, 10000, seed);
  if (!check.passed) throw ConfigError("rational function is not in the Schur class: " + check.diagnostic);
  return f;
}

AnalyticFunction from_measure_recipe(const MeasureSpec& mu) {
  auto f = AnalyticFunction::from_complement(
      "recipe",
      [mu](cd a, cd b) -> cd {
        // p = (1+z1)/(1-z1), q = (1+z2)/(1-z2)
        const cd p = (2.0 - a) / a;
        const cd q = (2.0 - b) / b;
        const cd psi = 4.0 * mu.reciprocal_linear(p + q, q - p);
        const cd v = (1.0 - psi) / (1.0 + psi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NumericalFault("measure recipe produced a non-finite value at " + describe({1.0 - a, 1.0 - b}));
        }
        return v;
      },
      !mu.density().has_value());
  for (const Point2& z : quasi_random_bidisk(64)) {
    try {
      (void)f(z);
    } catch (const NumericalFault& e) {
      throw ConfigError(std::string("measure recipe construction failed: ") + e.what());
    }
  }
  return f;
}

AnalyticFunction function_from_json(const nlohmann::json& j, std::size_t seed) {
  try {
    if (!j.is_object()) throw ConfigError("function descriptor must be a JSON object");
    if (j.contains("builtin")) {
      std::map<std::string, double> params;
      if (j.contains("params")) params = j.at("params").get<std::map<std::string, double>>();
      return builtin(parse_builtin(j.at("builtin").get<std::string>()), params);
    }
    if (j.contains("rational")) {
      const auto& r = j.at("rational");
      return rational(parse_grid(r.at("numer")), parse_grid(r.at("denom")), "rational", seed);
    }
    if (j.contains("recipe")) return from_measure_recipe(measure_from_json(j.at("recipe").at("measure")));
    throw ConfigError("function descriptor needs one of 'builtin', 'rational' or 'recipe'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed function descriptor: ") + e.what());
  }
}

void check_branch_continuity(const AnalyticFunction& phi, std::span<const Point2> path) {
  if (!phi.branch_phase() || path.size() < 2) return;
  const auto& phase = *phi.branch_phase();
  double prev = phase(path[0]);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double cur = phase(path[k]);
    if (std::abs(cur - prev) > 3.14159265358979323846) {
      throw NumericalFault("branch fault in " + phi.name() + ": logarithm phase jumps between " +
                           describe(path[k - 1]) + " and " + describe(path[k]));
    }
    prev = cur;
  }
}

}  // namespace bidisk
