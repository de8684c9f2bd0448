#include "bidisk/measure.hpp"

#include <cmath>
#include <string>

#include "bidisk/errors.hpp"

namespace bidisk {

Density::Density(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ConfigError("density needs at least one coefficient");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ConfigError("density coefficients must be finite");
  }
  for (int i = 0; i <= 2000; ++i) {
    const double t = -1.0 + i / 1000.0;
    if ((*this)(t) < 0.0) throw ConfigError("density must be non-negative on [-1, 1]");
  }
}

double Density::operator()(double t) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
  return v;
}

MeasureSpec::MeasureSpec(std::vector<Atom> atoms, std::optional<Density> density, int quadrature_order)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
  if (quadrature_order < 2) throw ConfigError("quadrature order must be at least 2");
  for (const Atom& a : atoms_) {
    if (!(a.t >= -1.0 && a.t <= 1.0)) throw ConfigError("atom location outside [-1, 1]");
    if (!(a.w > 0.0 && std::isfinite(a.w))) throw ConfigError("atom weights must be positive and finite");
  }
  rule_ = std::make_shared<const GaussLegendreRule>(quadrature_order);
  if (!(moments(*this, 0) > 0.0)) throw ConfigError("measure must have positive total mass");
}

MeasureSpec MeasureSpec::zero() {
  MeasureSpec mu;
  mu.rule_ = std::make_shared<const GaussLegendreRule>(2);
  return mu;
}

MeasureSpec MeasureSpec::lebesgue(int quadrature_order) {
  return MeasureSpec({}, Density::constant(1.0), quadrature_order);
}

MeasureSpec MeasureSpec::point_mass(double t, double w) { return MeasureSpec({{t, w}}, std::nullopt); }

cd MeasureSpec::reciprocal_linear(cd c0, cd c1, std::span<const double> weight) const {
  cd sum = 0.0;
  for (const Atom& a : atoms_) {
    double wt = 0.0;
    for (auto it = weight.rbegin(); it != weight.rend(); ++it) wt = wt * a.t + *it;
    if (wt != 0.0) sum += a.w * wt / (c0 + c1 * a.t);
  }
  if (density_ && !weight.empty()) {
    const auto& rho = density_->coeffs();
    std::vector<double> product(rho.size() + weight.size() - 1, 0.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      for (std::size_t j = 0; j < weight.size(); ++j) product[i + j] += rho[i] * weight[j];
    }
    sum += integrate_poly_reciprocal_linear(product, c0, c1, *rule_);
  }
  return sum;
}

cd MeasureSpec::reciprocal_linear(cd c0, cd c1) const {
  static constexpr double kOne[] = {1.0};
  return reciprocal_linear(c0, c1, kOne);
}

double moments(const MeasureSpec& mu, int k) {
  if (k < 0 || k > 2) throw DomainError("moments: k must be 0, 1 or 2");
  double sum = 0.0;
  for (const Atom& a : mu.atoms()) sum += a.w * std::pow(a.t, k);
  if (mu.density()) {
    const Density& rho = *mu.density();
    sum += mu.rule().integrate([&](double t) { return std::pow(t, k) * rho(t); });
  }
  return sum;
}

MeasureSpec measure_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("measure must be a JSON object");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at("t").get<double>(), a.at("w").get<double>()});
    }
    std::optional<Density> density;
    int order = MeasureSpec::kDefaultOrder;
    if (j.contains("density") && !j.at("density").is_null()) {
      const auto& d = j.at("density");
      const auto kind = d.at("kind").get<std::string>();
      auto coeffs = d.at("coeffs").get<std::vector<double>>();
      if (kind == "constant") {
        if (coeffs.size() != 1) throw ConfigError("constant density takes exactly one coefficient");
      } else if (kind != "poly") {
        throw ConfigError("unknown density kind '" + kind + "'");
      }
      if (d.contains("quadrature_order")) order = d.at("quadrature_order").get<int>();
      density.emplace(std::move(coeffs));
    }
    return MeasureSpec(std::move(atoms), std::move(density), order);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed measure JSON: ") + e.what());
  }
}

nlohmann::json measure_to_json(const MeasureSpec& mu) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : mu.atoms()) j["atoms"].push_back({{"t", a.t}, {"w", a.w}});
  if (mu.density()) {
    j["density"] = {{"kind", mu.density()->coeffs().size() == 1 ? "constant" : "poly"},
                    {"coeffs", mu.density()->coeffs()},
                    {"quadrature_order", mu.rule().order()}};
  }
  return j;
}

}  // namespace bidisk
