#include "bidisk/report.hpp"

#include <cmath>
#include <cstdio>

namespace bidisk {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; non-finite values become null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json julia_to_json(const JuliaSample& s) {
  return {{"z", point_to_json(s.z)},
          {"t", real(s.t)},
          {"aperture", real(s.aperture)},
          {"quotient", real(s.quotient)},
          {"direction_index", s.direction_index}};
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

json complex_to_json(cd v) { return json::array({real(v.real()), real(v.imag())}); }

json point_to_json(const Point2& z) { return json::array({complex_to_json(z.z1), complex_to_json(z.z2)}); }

json direction_to_json(const Direction& h) { return json::array({complex_to_json(h.h1), complex_to_json(h.h2)}); }

json derivative_to_json(const DerivativeSample& d) {
  return {{"h", direction_to_json(d.h)},
          {"value", complex_to_json(d.value)},
          {"extrapolation_error", real(d.extrapolation_error)},
          {"level_difference", real(d.level_difference)},
          {"rounding_floor", real(d.rounding_floor)}};
}

json report_to_json(const ClassificationReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["function"] = {{"name", r.function_name}, {"is_rational", r.is_rational}, {"params", r.params}};
  j["tau"] = json::array({complex_to_json(r.tau.tau1()), complex_to_json(r.tau.tau2())});
  j["verdict"] = to_string(r.verdict);

  json values = json::array();
  for (cd v : r.omega.path_values) values.push_back(complex_to_json(v));
  j["omega"] = {{"value", complex_to_json(r.omega.omega)},
                {"converged", r.omega.converged},
                {"extrapolation_error", real(r.omega.extrapolation_error)},
                {"path_values", values}};

  json gammas = json::array();
  for (const auto& g : r.gamma_by_aperture) {
    json per_t = json::array();
    for (double v : g.per_t_sup) per_t.push_back(real(v));
    gammas.push_back({{"aperture", g.aperture},
                      {"sup", real(g.sup)},
                      {"sample_count", g.sample_count},
                      {"empty", g.empty()},
                      {"per_t_sup", per_t},
                      {"argmax", g.argmax ? julia_to_json(*g.argmax) : json(nullptr)}});
  }
  j["gamma_by_aperture"] = gammas;
  j["alpha_estimate"] = real(r.alpha_estimate);
  j["lambda"] = r.lambda ? json::array({complex_to_json(r.lambda->first), complex_to_json(r.lambda->second)})
                         : json(nullptr);
  j["beta_residual"] = real(r.beta_residual);

  json radial = json::array();
  for (const auto& s : r.radial.samples) radial.push_back(julia_to_json(s));
  j["radial"] = {{"tail_sup", real(r.radial.tail_sup)},
                 {"limit", real(r.radial.limit)},
                 {"limit_error", real(r.radial.limit_error)},
                 {"limit_certified", r.radial.limit_certified},
                 {"samples", radial}};

  if (r.bplus) {
    json bulk = json::array();
    for (const auto& d : r.bplus->bulk) bulk.push_back(derivative_to_json(d));
    json esc = json::array();
    for (const auto& tr : r.bplus->escalations) {
      json samples = json::array();
      for (const auto& d : tr.samples) samples.push_back(derivative_to_json(d));
      json ratios = json::array();
      for (double v : tr.ratios) ratios.push_back(real(v));
      esc.push_back({{"label", tr.label},
                     {"eps", tr.eps},
                     {"ratios", ratios},
                     {"trend_positive", tr.trend_positive},
                     {"samples", samples}});
    }
    j["bplus"] = {{"alpha_estimate", real(r.bplus->alpha_estimate)},
                  {"diverging", r.bplus->diverging},
                  {"inconclusive", r.bplus->inconclusive},
                  {"worst_direction", direction_to_json(r.bplus->worst_direction)},
                  {"bulk", bulk},
                  {"escalations", esc}};
  } else {
    j["bplus"] = nullptr;
  }

  if (r.c) {
    json samples = json::array();
    for (const auto& d : r.c->samples) samples.push_back(derivative_to_json(d));
    j["c_probe"] = {{"lambda", json::array({complex_to_json(r.c->lambda.first), complex_to_json(r.c->lambda.second)})},
                    {"beta_residual", real(r.c->beta_residual)},
                    {"samples", samples}};
  } else {
    j["c_probe"] = nullptr;
  }

  if (r.slope) {
    json samples = json::array();
    for (const auto& s : r.slope->samples) {
      samples.push_back({{"w", complex_to_json(s.w)},
                         {"eta_direct", complex_to_json(s.eta_direct)},
                         {"eta_pick", complex_to_json(s.eta_pick)},
                         {"error_direct", real(s.error_direct)},
                         {"error_pick", real(s.error_pick)},
                         {"agree", s.agree}});
    }
    j["slope"] = samples;
  } else {
    j["slope"] = nullptr;
  }

  if (r.rational_reprobe) {
    j["rational_reprobe"] = {{"beta_residual", real(r.rational_reprobe->beta_residual)},
                             {"threshold", r.rational_reprobe->threshold},
                             {"passed", r.rational_reprobe->passed}};
  } else {
    j["rational_reprobe"] = nullptr;
  }

  json gates = json::array();
  for (const auto& g : r.gates) {
    gates.push_back({{"name", g.name},
                     {"status", to_string(g.status)},
                     {"value", real(g.value)},
                     {"threshold", real(g.threshold)},
                     {"note", g.note}});
  }
  j["gates"] = gates;
  j["warnings"] = r.warnings;
  return j;
}

json escalation_to_json(const EscalationDiagnostic& diag) {
  json steps = json::array();
  for (const auto& s : diag.steps) steps.push_back({{"N", s.n}, {"gamma", real(s.gamma)}, {"alpha", real(s.alpha)}});
  return {{"steps", steps}, {"geometric", diag.geometric}};
}

std::string sweep_csv(std::span<const JuliaSample> rows) {
  std::string out = "t,z1_re,z1_im,z2_re,z2_im,aperture,quotient\n";
  for (const auto& r : rows) {
    for (double v : {r.t, r.z.z1.real(), r.z.z1.imag(), r.z.z2.real(), r.z.z2.imag(), r.aperture}) {
      append_number(out, v);
      out += ',';
    }
    append_number(out, r.quotient);
    out += '\n';
  }
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace bidisk
