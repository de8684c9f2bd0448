#include "bidisk/cli.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bidisk/catalog.hpp"
#include "bidisk/classifier.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/measure.hpp"
#include "bidisk/pick.hpp"
#include "bidisk/report.hpp"

namespace bidisk::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string builtin_name;
  std::vector<std::string> params;
  std::string function_json;
  std::string measure_json;
  std::string measure_name;
  std::string tau = "1,0,1,0";
  std::string apertures;
  int depth = 40;
  double ratio = 2.0;
  int levels = 4;
  std::string out;
  std::string format;
  std::string direction;
  std::string at;
  double b_threshold = 1e3;
  double bplus_ceiling = kDefaultBPlusCeiling;
  double c_tol = 1e-4;
  double omega_tol = 1e-6;
};

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

std::pair<cd, cd> parse_pair(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 4) throw ConfigError(what + " takes four numbers re,im,re,im");
  return {cd(v[0], v[1]), cd(v[2], v[3])};
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param takes key=value, got '" + item + "'");
    params[item.substr(0, eq)] = parse_real(item.substr(eq + 1), "--param " + item.substr(0, eq));
  }
  return params;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

AnalyticFunction load_function(const Options& o, std::size_t seed) {
  const bool has_builtin = !o.builtin_name.empty();
  const bool has_file = !o.function_json.empty();
  if (has_builtin == has_file) throw ConfigError("give exactly one of --builtin and --function-json");
  if (has_builtin) return builtin(parse_builtin(o.builtin_name), parse_params(o.params));
  if (!o.params.empty()) throw ConfigError("--param applies to --builtin; put parameters in the descriptor");
  return function_from_json(read_json(o.function_json), seed);
}

BoundaryPoint load_tau(const Options& o) {
  const auto [t1, t2] = parse_pair(o.tau, "--tau");
  try {
    return {t1, t2};
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--tau: ") + e.what());
  }
}

ScheduleSpec load_schedule(const Options& o) {
  ScheduleSpec s{1.0, o.ratio, o.depth};
  if (s.depth < 8) throw ConfigError("--depth must be at least 8");
  if (!(s.ratio > 1.0)) throw ConfigError("--ratio must exceed 1");
  return s;
}

std::vector<double> load_apertures(const Options& o) {
  const auto a = parse_list(o.apertures, "--apertures");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) throw ConfigError("--apertures must be positive");
    if (i > 0 && !(a[i] > a[i - 1])) throw ConfigError("--apertures must be strictly ascending");
  }
  return a;
}

ClassifyConfig load_config(const Options& o) {
  ClassifyConfig c;
  c.schedule = load_schedule(o);
  c.levels = o.levels;
  if (!o.apertures.empty()) c.apertures = load_apertures(o);
  c.b_threshold = o.b_threshold;
  c.bplus_ceiling = o.bplus_ceiling;
  c.c_tol = o.c_tol;
  c.omega_tol = o.omega_tol;
  c.validate();
  return c;
}

void require_json(const Options& o) {
  if (!o.format.empty() && o.format != "json") throw ConfigError("this command writes json only");
}

json function_header(const AnalyticFunction& phi) {
  return {{"name", phi.name()}, {"is_rational", phi.is_rational()}, {"params", phi.params()}};
}

json grid_to_json(const Polynomial2& p) {
  json rows = json::array();
  for (const auto& row : p.coeffs()) {
    json r = json::array();
    for (cd c : row) r.push_back(complex_to_json(c));
    rows.push_back(r);
  }
  return rows;
}

MeasureSpec named_measure(const std::string& name) {
  if (name == "lebesgue") return MeasureSpec::lebesgue();
  if (name == "delta0") return MeasureSpec::point_mass(0.0);
  if (name == "delta1") return MeasureSpec::point_mass(1.0);
  if (name == "delta-1") return MeasureSpec::point_mass(-1.0);
  if (name == "endpoints") return MeasureSpec({{-1.0, 1.0}, {1.0, 1.0}}, std::nullopt);
  throw ConfigError("unknown measure '" + name + "' (expected lebesgue, delta0, delta1, delta-1 or endpoints)");
}

std::string cmd_classify(const Options& o, std::size_t seed) {
  require_json(o);
  const AnalyticFunction phi = load_function(o, seed);
  const BoundaryPoint tau = load_tau(o);
  const ClassifyConfig config = load_config(o);
  ClassificationReport report = classify(phi, tau, config);

  std::optional<EscalationDiagnostic> escalation;
  if (!o.builtin_name.empty() && phi.name() == "phi4") {
    const int n_max = static_cast<int>(phi.params().at("N"));
    std::vector<int> ns;
    for (int n : {5, 10, 15, 20}) {
      if (n <= n_max) ns.push_back(n);
    }
    if (!ns.empty()) {
      escalation = escalation_diagnostic(
          [](int n) { return builtin(Builtin::phi4, {{"N", static_cast<double>(n)}}); }, ns, tau, config);
      report.warnings.push_back(
          "verdict applies to the " + std::to_string(n_max) + "-term truncation; across truncations N = " +
          std::to_string(ns.front()) + ".." + std::to_string(ns.back()) +
          (escalation->geometric ? " the radial Julia-quotient limit and the derivative bound grow geometrically"
                                 : " the escalation evidence is not geometric") +
          ", so the infinite product has no finite certificate");
    }
  }
  json j = report_to_json(report);
  j["escalation"] = escalation ? escalation_to_json(*escalation) : json(nullptr);
  return dump(j);
}

std::string cmd_sweep(const Options& o, std::size_t seed) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format != "csv" && format != "json") throw ConfigError("--format must be json or csv");
  const AnalyticFunction phi = load_function(o, seed);
  const BoundaryPoint tau = load_tau(o);
  const std::vector<double> ts = load_schedule(o).points();

  std::vector<JuliaSample> rows;
  if (o.apertures.empty()) {
    const std::vector<Direction> radial{Direction(-tau.tau1(), -tau.tau2())};
    rows = julia_sweep(phi, tau, ts, radial);
  } else {
    const auto apertures = load_apertures(o);
    rows = julia_sweep(phi, tau, ts, direction_lattice(tau, ClassifyConfig{}.nt_lattice), apertures.back());
  }
  if (format == "csv") return sweep_csv(rows);
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"t", r.t},
                   {"z", point_to_json(r.z)},
                   {"aperture", r.aperture},
                   {"quotient", r.quotient},
                   {"direction_index", r.direction_index}});
  }
  return dump({{"schema", kReportSchema}, {"function", function_header(phi)}, {"rows", out}});
}

std::string cmd_derivative(const Options& o, std::size_t seed) {
  require_json(o);
  const AnalyticFunction phi = load_function(o, seed);
  const BoundaryPoint tau = load_tau(o);
  const ClassifyConfig config = load_config(o);
  Direction h(-tau.tau1(), -tau.tau2());
  if (!o.direction.empty()) {
    const auto [h1, h2] = parse_pair(o.direction, "--direction");
    h = Direction(h1, h2);
    if (!h.is_inward(tau)) throw ConfigError("--direction is not inward at tau");
  }
  const OmegaEstimate omega = estimate_omega(phi, tau, config.schedule, config.levels);
  const DerivativeSample d = directional_derivative(phi, tau, omega.omega, h, config.levels, config.schedule);
  return dump({{"schema", kReportSchema},
               {"function", function_header(phi)},
               {"tau", json::array({complex_to_json(tau.tau1()), complex_to_json(tau.tau2())})},
               {"omega",
                {{"value", complex_to_json(omega.omega)},
                 {"converged", omega.converged},
                 {"extrapolation_error", omega.extrapolation_error}}},
               {"levels", config.levels},
               {"derivative", derivative_to_json(d)}});
}

std::string cmd_decompose(const Options& o) {
  require_json(o);
  if (o.measure_json.empty() == o.measure_name.empty()) {
    throw ConfigError("give exactly one of --measure-json and --measure");
  }
  const MeasureSpec mu =
      o.measure_json.empty() ? named_measure(o.measure_name) : measure_from_json(read_json(o.measure_json));
  const HomogeneousPick f = f_from_measure(mu);
  const GBoundProbe probe = g_bound_probe(f);
  const LinearityResult lin = linearity_test(f);
  const double m0 = moments(mu, 0);
  const double m1 = moments(mu, 1);
  const double m2 = moments(mu, 2);
  return dump({{"schema", kReportSchema},
               {"measure", measure_to_json(mu)},
               {"A", m0 - m1},
               {"B", m0 + m1},
               {"moments", {m0, m1, m2}},
               {"g_bound_probe",
                {{"bounded", probe.bounded},
                 {"bound_estimate", probe.bound_estimate},
                 {"witness", complex_to_json(probe.witness)},
                 {"shell_distances", probe.shell_distances},
                 {"shell_sups", probe.shell_sups}}},
               {"linearity",
                {{"is_linear", lin.is_linear},
                 {"lambda", json::array({complex_to_json(lin.lambda.first), complex_to_json(lin.lambda.second)})},
                 {"residual", lin.residual},
                 {"matches_moments", lin.matches_moments ? json(*lin.matches_moments) : json(nullptr)}}}});
}

std::string cmd_construct(const Options& o, std::size_t seed) {
  require_json(o);
  const AnalyticFunction phi = load_function(o, seed);
  const SchurCheck check = schur_sample_check(phi, 10000, seed);
  json j = {{"schema", kReportSchema},
            {"function", function_header(phi)},
            {"schur_check",
             {{"passed", check.passed},
              {"max_modulus", check.max_modulus},
              {"worst", point_to_json(check.worst)},
              {"diagnostic", check.diagnostic}}}};
  if (phi.rational()) {
    j["rational"] = {{"numer", grid_to_json(phi.rational()->numer)}, {"denom", grid_to_json(phi.rational()->denom)}};
  }
  if (!o.at.empty()) {
    const auto [z1, z2] = parse_pair(o.at, "--at");
    const Point2 z{z1, z2};
    if (!z.is_interior()) throw ConfigError("--at must lie in the open bidisk");
    j["at"] = {{"z", point_to_json(z)}, {"value", complex_to_json(phi(z))}};
  }
  return dump(j);
}

std::string cmd_list_examples(const Options& o) {
  require_json(o);
  json functions = json::array();
  const std::pair<const char*, const char*> builtins[] = {
      {"phi1", "rational inner function; (1,1) is a C point with gradient (0, 2)"},
      {"phi2", "logarithmic Schur function; (1,1) is a B+ point but not a C point"},
      {"phi3", "rational inner function; (1,1) is a B point but not a B+ point"},
      {"phi4", "N-term partial product (param N, default 20) with zeros at (1 - 2^-n)(1,1)"},
  };
  for (auto [name, text] : builtins) {
    functions.push_back({{"name", name}, {"descriptor", {{"builtin", name}}}, {"description", text}});
  }
  json measures = json::array();
  const std::pair<const char*, const char*> named[] = {
      {"lebesgue", "Lebesgue measure on [-1, 1]; nonlinear Pick function with bounded g"},
      {"delta0", "unit point mass at 0; unbounded g"},
      {"delta1", "unit point mass at 1; linear Pick function"},
      {"delta-1", "unit point mass at -1; linear Pick function"},
      {"endpoints", "unit point masses at -1 and 1; linear Pick function"},
  };
  for (auto [name, text] : named) {
    measures.push_back({{"name", name}, {"measure", measure_to_json(named_measure(name))}, {"description", text}});
  }
  return dump({{"schema", kReportSchema}, {"functions", functions}, {"measures", measures}});
}

void add_function_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--builtin", o.builtin_name, "Builtin function: phi1, phi2, phi3 or phi4");
  cmd->add_option("--param", o.params, "Builtin parameter key=value (repeatable)");
  cmd->add_option("--function-json", o.function_json, "Function descriptor file");
}

void add_schedule_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tau", o.tau, "Torus point re,im,re,im")->capture_default_str();
  cmd->add_option("--apertures", o.apertures, "Cone apertures a,b,c (ascending)");
  cmd->add_option("--depth", o.depth, "Schedule depth K (t_k = ratio^-k, k = 1..K)")->capture_default_str();
  cmd->add_option("--ratio", o.ratio, "Schedule ratio")->capture_default_str();
  cmd->add_option("--levels", o.levels, "Richardson levels")->capture_default_str();
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (default stdout)");
  cmd->add_option("--format", o.format, "json or csv");
}

}  // namespace

std::size_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw ConfigError("BIDISK_JULIA_SEED must be a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

CommandResult run(const std::vector<std::string>& args, std::size_t seed) {
  CommandResult result;
  Options o;
  CLI::App app{"Boundary regularity of Schur functions on the bidisk at torus points", "bidisk_julia"};
  app.require_subcommand(1);

  auto* classify_cmd = app.add_subcommand("classify", "Classify tau as a B, B+ or C point; JSON report");
  add_function_options(classify_cmd, o);
  add_schedule_options(classify_cmd, o);
  add_output_options(classify_cmd, o);
  classify_cmd->add_option("--b-threshold", o.b_threshold, "B gate threshold")->capture_default_str();
  classify_cmd->add_option("--bplus-ceiling", o.bplus_ceiling, "B+ divergence ceiling")->capture_default_str();
  classify_cmd->add_option("--c-tol", o.c_tol, "C gate linearity tolerance")->capture_default_str();
  classify_cmd->add_option("--omega-tol", o.omega_tol, "Tolerance on |omega| = 1")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Julia quotients along the radial path or in a cone; CSV");
  add_function_options(sweep_cmd, o);
  add_schedule_options(sweep_cmd, o);
  add_output_options(sweep_cmd, o);

  auto* derivative_cmd = app.add_subcommand("derivative", "Directional derivative at tau");
  add_function_options(derivative_cmd, o);
  add_schedule_options(derivative_cmd, o);
  add_output_options(derivative_cmd, o);
  derivative_cmd->add_option("--direction", o.direction, "Inward direction re,im,re,im (default radial)");

  auto* decompose_cmd = app.add_subcommand("decompose", "Moments, g bound and linearity of a measure's Pick function");
  decompose_cmd->add_option("--measure-json", o.measure_json, "Measure file");
  decompose_cmd->add_option("--measure", o.measure_name, "Named example measure (see list-examples)");
  add_output_options(decompose_cmd, o);

  auto* construct_cmd = app.add_subcommand("construct", "Build a function and check the Schur property");
  add_function_options(construct_cmd, o);
  add_output_options(construct_cmd, o);
  construct_cmd->add_option("--at", o.at, "Evaluate at the point re,im,re,im");

  auto* list_cmd = app.add_subcommand("list-examples", "Builtin functions and example measures");
  add_output_options(list_cmd, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    result.out = out.str();
    result.err = err.str();
    result.exit_code = code == 0 ? kOk : kConfigError;
    return result;
  }
  result.out_path = o.out;

  try {
    if (*classify_cmd) {
      result.out = cmd_classify(o, seed);
    } else if (*sweep_cmd) {
      result.out = cmd_sweep(o, seed);
    } else if (*derivative_cmd) {
      result.out = cmd_derivative(o, seed);
    } else if (*decompose_cmd) {
      result.out = cmd_decompose(o);
    } else if (*construct_cmd) {
      result.out = cmd_construct(o, seed);
    } else if (*list_cmd) {
      result.out = cmd_list_examples(o);
    }
  } catch (const NumericalFault& e) {
    result.exit_code = kNumericalFault;
    result.err = std::string("numerical fault: ") + e.what() + "\n";
  } catch (const std::invalid_argument& e) {
    result.exit_code = kConfigError;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::domain_error& e) {
    result.exit_code = kConfigError;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const nlohmann::json::exception& e) {
    result.exit_code = kConfigError;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    result.exit_code = kNumericalFault;
    result.err = std::string("numerical fault: ") + e.what() + "\n";
  }
  if (result.exit_code != kOk) result.out.clear();
  return result;
}

}  // namespace bidisk::cli
