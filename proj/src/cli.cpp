#include "aniso/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aniso/greens.hpp"
#include "aniso/interp.hpp"
#include "aniso/uniaxial.hpp"
#include "aniso/validation.hpp"

namespace aniso::cli {

namespace {

using Json = nlohmann::ordered_json;
using Settings = std::map<std::string, std::string>;

// Request for --help; carries the rendered text.
struct HelpRequested {
  std::string text;
};

// ---------------------------------------------------------------- output

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  std::string s = format_number(v);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void dump(const Json& j, std::string& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      s += "{}";
      return;
    }
    s += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) s += ",\n";
      first = false;
      s += pad + Json(key).dump() + ": ";
      dump(value, s, indent + 2);
    }
    s += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
    if (j.empty() || flat) {
      s += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ", ";
        dump(j[i], s, indent);
      }
      s += "]";
      return;
    }
    s += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ",\n";
      s += pad;
      dump(j[i], s, indent + 2);
    }
    s += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else if (j.is_number_float()) {
    s += json_number(j.get<double>());
  } else {
    s += j.dump();
  }
}

std::string render(const Json& j) {
  std::string s;
  dump(j, s, 0);
  return s + "\n";
}

std::string csv_number(double v) { return std::isfinite(v) ? format_number(v) : ""; }

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json quadrature_json(const std::optional<QuadratureResult>& q) {
  if (!q) return nullptr;
  return Json{{"theta_order", q->theta_order},
              {"phi_points", q->phi_points},
              {"est_rel_error", q->est_rel_error}};
}

// ---------------------------------------------------------------- settings

const std::array<const char*, 24> kKeys{
    "command", "eps",   "eps_x",       "eps_y",  "eps_z",   "dipole", "dipole_angles", "frame",
    "method",  "tol",   "theta_rule",  "phi_points", "max_order", "sweep", "range",    "local_field",
    "output",  "out",   "seed",        "samples", "si",     "omega",  "dipole_si",     "inject_fault"};

std::string json_to_setting(const std::string& key, const nlohmann::json& v) {
  auto scalar = [&](const nlohmann::json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
    if (x.is_number_integer() || x.is_number_unsigned()) return x.dump();
    if (x.is_number_float()) return format_number(x.get<double>());
    throw ConfigError("config key '" + key + "' has an unsupported value");
  };
  if (!v.is_array()) return scalar(v);
  const char* sep = key == "range" ? ":" : ",";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += scalar(v[i]);
  }
  return s;
}

void load_config_file(const std::string& path, Settings& settings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "inject_fault" ||
        std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return key == k; }) == kKeys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    settings[key] = json_to_setting(key, value);
  }
}

int parse_int(const std::string& text, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const char* what) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(what) + ": expected true or false, got '" + text + "'");
}

Command parse_command(const std::string& s) {
  if (s == "rate") return Command::rate;
  if (s == "angular") return Command::angular;
  if (s == "sweep") return Command::sweep;
  if (s == "greens") return Command::greens;
  if (s == "validate") return Command::validate;
  throw ConfigError("unknown command '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "closed") return Method::closed;
  if (s == "numeric") return Method::numeric;
  if (s == "model") return Method::model;
  throw ConfigError("--method must be auto, closed, numeric or model");
}

int parse_axis(const std::string& s) {
  if (s == "eps_x" || s == "x") return 0;
  if (s == "eps_y" || s == "y") return 1;
  if (s == "eps_z" || s == "z") return 2;
  throw ConfigError("--sweep must be eps_x, eps_y or eps_z");
}

const char* axis_name(int axis) {
  static constexpr std::array<const char*, 3> names{"eps_x", "eps_y", "eps_z"};
  return names[static_cast<std::size_t>(axis)];
}

RunConfig interpret(const Settings& s) {
  RunConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };

  const std::string* command = get("command");
  if (!command) throw ConfigError("no command given (rate, angular, sweep, greens, validate)");
  cfg.command = parse_command(*command);

  if (const auto* v = get("eps")) {
    const auto e = parse_list(*v, 3);
    for (int i = 0; i < 3; ++i) cfg.eps[i] = e[i];
  }
  const std::array<const char*, 3> eps_keys{"eps_x", "eps_y", "eps_z"};
  for (int i = 0; i < 3; ++i) {
    if (const auto* v = get(eps_keys[i])) cfg.eps[i] = parse_number(*v);
  }
  for (const auto& e : cfg.eps) {
    if (e && !(std::isfinite(*e) && *e > 0.0)) throw ConfigError("permittivities must be finite and > 0");
  }

  try {
    if (const auto* v = get("frame")) {
      const auto f = parse_list(*v, 9);
      std::array<double, 9> m{};
      std::copy(f.begin(), f.end(), m.begin());
      cfg.frame = MaterialFrame::from_row_major(m);
    }
    const auto* dip = get("dipole");
    const auto* angles = get("dipole_angles");
    if (dip && angles) throw ConfigError("give either --dipole or --dipole-angles, not both");
    Direction lab = Direction::axis(2);
    if (dip) {
      const auto d = parse_list(*dip, 3);
      lab = Direction::normalized(d[0], d[1], d[2]);
    } else if (angles) {
      const auto a = parse_list(*angles, 2, true);
      lab = Direction::from_angles(a[0], a[1]);
    }
    cfg.dipole = to_crystal_frame(cfg.frame, lab);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (const auto* v = get("method")) cfg.method = parse_method(*v);
  if (const auto* v = get("tol")) cfg.quadrature.target_rel_tol = parse_number(*v);
  if (const auto* v = get("theta_rule")) cfg.quadrature.theta_rule = parse_int(*v, "--theta-rule");
  if (const auto* v = get("phi_points")) cfg.quadrature.phi_points = parse_int(*v, "--phi-points");
  if (const auto* v = get("max_order")) cfg.quadrature.max_order = parse_int(*v, "--max-order");
  try {
    cfg.quadrature.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (const auto* v = get("sweep")) cfg.sweep_axis = parse_axis(*v);
  if (const auto* v = get("range")) cfg.range = parse_range(*v);

  if (const auto* v = get("local_field")) {
    const auto l = parse_list(*v, 3);
    try {
      cfg.local_field = LocalFieldTensor(l[0], l[1], l[2]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (const auto* v = get("output")) {
    if (*v == "csv") {
      cfg.output = OutputFormat::csv;
    } else if (*v == "json") {
      cfg.output = OutputFormat::json;
    } else {
      throw ConfigError("--output must be csv or json");
    }
  }
  if (const auto* v = get("out")) cfg.output_path = *v;
  if (const auto* v = get("seed")) {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
    if (ec != std::errc() || ptr != v->data() + v->size()) throw ConfigError("--seed must be a non-negative integer");
    cfg.seed = seed;
  }
  if (const auto* v = get("samples")) {
    cfg.samples = parse_int(*v, "--samples");
    if (cfg.samples < 2) throw ConfigError("--samples must be >= 2");
  }

  const auto* si = get("si");
  if (si && parse_bool(*si, "--si")) {
    const auto* omega = get("omega");
    const auto* dsi = get("dipole_si");
    if (!omega || !dsi) throw ConfigError("--si needs --omega and --dipole-si");
    SiRequest req{parse_number(*omega), parse_number(*dsi)};
    try {
      PhysicalContext{req.omega, req.dipole_si}.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.si = req;
  }
  if (const auto* v = get("inject_fault")) cfg.inject_fault = parse_bool(*v, "--inject-fault");

  // Per-command requirements.
  switch (cfg.command) {
    case Command::rate:
    case Command::greens:
    case Command::angular:
      cfg.tensor();
      break;
    case Command::sweep: {
      if (!cfg.sweep_axis) throw ConfigError("sweep needs --sweep eps_x|eps_y|eps_z");
      if (cfg.range.count == 0) throw ConfigError("sweep needs --range start:stop:count");
      for (int i = 0; i < 3; ++i) {
        if (i != *cfg.sweep_axis && !cfg.eps[i]) {
          throw ConfigError(std::string("sweep needs ") + axis_name(i));
        }
      }
      break;
    }
    case Command::validate: break;
  }
  if (cfg.local_field && cfg.command == Command::greens) {
    throw ConfigError("greens compares bare routes; --local-field does not apply");
  }
  return cfg;
}

// ---------------------------------------------------------------- rates

struct Evaluated {
  RateResult result;
  bool converged = true;
};

RateResult from_best(const QuadratureResult& best) {
  RateResult r;
  r.gamma_normalized = best.value;
  r.branches[0] = {"slow", std::nan("")};
  r.branches[1] = {"fast", std::nan("")};
  r.quadrature = best;
  r.method = MethodTag::quadrature;
  return r;
}

RateResult scaled(RateResult r, double factor) {
  r.gamma_normalized *= factor;
  for (auto& b : r.branches) b.gamma *= factor;
  return r;
}

Evaluated evaluate_numeric(const PermittivityTensor& eps, const Direction& d,
                           const std::optional<LocalFieldTensor>& l, const QuadratureSpec& spec) {
  try {
    return {l ? rate_biaxial_local(eps, d, *l, spec) : rate_numeric(eps, d, spec), true};
  } catch (const ToleranceNotReached& e) {
    if (!l) return {from_best(e.best()), false};
  }
  // Rebuild the local-field sum from the best value of every axis.
  std::array<RateResult, 3> per_axis;
  std::array<double, 3> weights{};
  for (int i = 0; i < 3; ++i) {
    weights[i] = d[i] * d[i] * (*l)[i] * (*l)[i];
    if (weights[i] == 0.0) continue;
    try {
      per_axis[i] = rate_numeric(eps, Direction::axis(i), spec);
    } catch (const ToleranceNotReached& e) {
      per_axis[i] = from_best(e.best());
    }
  }
  return {combine_axis_rates(per_axis, weights), false};
}

RateResult evaluate_closed(const PermittivityTensor& eps, const Direction& d,
                           const std::optional<LocalFieldTensor>& l) {
  if (eps.kind() == MediumKind::biaxial) {
    throw ConfigError("--method closed needs an isotropic or uniaxial medium");
  }
  const UniaxialMedium m = UniaxialMedium::from_tensor(eps);
  if (!l) return rate_uniaxial_total(m, split_dipole(m, d));
  const int a = eps.distinguished_axis();
  const double l2 = (*l)[(a + 1) % 3];
  const double l3 = (*l)[(a + 2) % 3];
  if (l2 * l2 == l3 * l3) return rate_uniaxial_local(m, split_dipole(m, d), *l);
  std::array<RateResult, 3> per_axis;
  std::array<double, 3> weights{};
  for (int i = 0; i < 3; ++i) {
    per_axis[i] = rate_uniaxial_total(m, i == a ? DipoleSplit::parallel() : DipoleSplit::perpendicular());
    weights[i] = d[i] * d[i] * (*l)[i] * (*l)[i];
  }
  return combine_axis_rates(per_axis, weights);
}

RateResult evaluate_model(const PermittivityTensor& eps, const Direction& d,
                          const std::optional<LocalFieldTensor>& l) {
  if (!l) return rate_model(eps, d);
  const AdjustedDipole adj = adjust_dipole(*l, d);
  return scaled(rate_model(eps, adj.direction), adj.magnitude * adj.magnitude);
}

Evaluated evaluate(const PermittivityTensor& eps, const Direction& d, Method method,
                   const std::optional<LocalFieldTensor>& l, const QuadratureSpec& spec) {
  if (method == Method::automatic) {
    method = eps.kind() == MediumKind::biaxial ? Method::numeric : Method::closed;
  }
  switch (method) {
    case Method::closed: return {evaluate_closed(eps, d, l), true};
    case Method::numeric: return evaluate_numeric(eps, d, l, spec);
    case Method::model: return {evaluate_model(eps, d, l), true};
    case Method::automatic: break;
  }
  throw std::logic_error("unreachable method");
}

// ---------------------------------------------------------------- commands

struct Output {
  std::string text;
  int code = kExitOk;
};

Output cmd_rate(const RunConfig& cfg) {
  const PermittivityTensor eps = cfg.tensor();
  const Evaluated ev = evaluate(eps, cfg.dipole, cfg.method, cfg.local_field, cfg.quadrature);
  const RateResult& r = ev.result;
  std::optional<double> gamma_vac;
  if (cfg.si) gamma_vac = vacuum_rate({cfg.si->omega, cfg.si->dipole_si});

  Output o;
  o.code = ev.converged ? kExitOk : kExitToleranceNotReached;
  if (cfg.format() == OutputFormat::csv) {
    std::string row = csv_number(r.gamma_normalized) + "," + std::string(to_string(r.method));
    for (const auto& b : r.branches) row += "," + b.label + "," + csv_number(b.gamma);
    row += "," + (r.quadrature ? std::to_string(r.quadrature->theta_order) : std::string());
    row += "," + (r.quadrature ? csv_number(r.quadrature->est_rel_error) : std::string());
    row += ev.converged ? ",true," : ",false,";
    if (gamma_vac) row += csv_number(*gamma_vac * r.gamma_normalized);
    o.text = std::string(kRateHeader) + "\n" + row + "\n";
    return o;
  }

  Json j;
  j["command"] = "rate";
  j["eps"] = vec_json(eps.diagonal());
  j["medium"] = std::string(to_string(eps.kind()));
  j["dipole"] = vec_json(cfg.dipole.vec());
  j["local_field"] = cfg.local_field ? vec_json(cfg.local_field->diagonal()) : Json(nullptr);
  j["method"] = std::string(to_string(r.method));
  j["gamma_normalized"] = r.gamma_normalized;
  j["branches"] = Json::array();
  for (const auto& b : r.branches) j["branches"].push_back(Json{{"label", b.label}, {"gamma", b.gamma}});
  j["converged"] = ev.converged;
  j["quadrature"] = quadrature_json(r.quadrature);
  j["target_rel_tol"] = cfg.quadrature.target_rel_tol;
  if (gamma_vac) {
    j["si"] = Json{{"omega", cfg.si->omega},
                   {"dipole_si", cfg.si->dipole_si},
                   {"gamma_vac", *gamma_vac},
                   {"gamma", *gamma_vac * r.gamma_normalized}};
  }
  o.text = render(j);
  return o;
}

Output cmd_angular(const RunConfig& cfg, std::ostream& err) {
  const PermittivityTensor eps = cfg.tensor();
  if (eps.kind() == MediumKind::biaxial) throw ConfigError("angular needs an isotropic or uniaxial medium");
  const UniaxialMedium m = UniaxialMedium::from_tensor(eps);
  const std::vector<double> peaks = peak_emission_angles(m);

  const int n = cfg.samples;
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) theta[i] = std::numbers::pi * i / (n - 1);
  theta.back() = std::numbers::pi;

  Output o;
  if (cfg.format() == OutputFormat::csv) {
    o.text = std::string(kAngularHeader) + "\n";
    for (double t : theta) o.text += format_number(t) + "," + format_number(angular_distribution(m, t)) + "\n";
    err << "peak_angles_rad:";
    for (double p : peaks) err << ' ' << format_number(p);
    err << '\n';
    return o;
  }
  Json j;
  j["command"] = "angular";
  j["eps1"] = m.eps1();
  j["eps2"] = m.eps2();
  j["axis"] = eps.distinguished_axis();
  j["peak_angles_rad"] = peaks;
  j["theta_rad"] = theta;
  Json f = Json::array();
  for (double t : theta) f.push_back(angular_distribution(m, t));
  j["f_theta"] = f;
  o.text = render(j);
  return o;
}

Output cmd_sweep(const RunConfig& cfg) {
  const int axis = *cfg.sweep_axis;
  const std::vector<double> values = cfg.range.values();
  const bool csv = cfg.format() == OutputFormat::csv;

  Output o;
  std::string text = csv ? std::string(kSweepHeader) + "\n" : std::string();
  Json rows = Json::array();
  double max_rel = 0.0;
  bool converged = true;
  for (double v : values) {
    Vec3 diag;
    for (int i = 0; i < 3; ++i) diag[i] = i == axis ? v : *cfg.eps[i];
    const PermittivityTensor eps(diag);
    const Evaluated numeric = evaluate_numeric(eps, cfg.dipole, cfg.local_field, cfg.quadrature);
    const double model = evaluate_model(eps, cfg.dipole, cfg.local_field).gamma_normalized;
    std::optional<double> closed;
    if (eps.kind() != MediumKind::biaxial) {
      closed = evaluate_closed(eps, cfg.dipole, cfg.local_field).gamma_normalized;
    }
    const double g = numeric.result.gamma_normalized;
    const double rel = std::abs(model - g) / std::abs(g);
    const QuadratureResult& q = *numeric.result.quadrature;
    max_rel = std::max(max_rel, rel);
    converged = converged && numeric.converged;

    if (csv) {
      text += format_number(v) + "," + csv_number(g) + "," + csv_number(model) + "," +
              (closed ? csv_number(*closed) : std::string()) + "," + csv_number(rel) + "," +
              std::to_string(q.theta_order) + "," + csv_number(q.est_rel_error) + "\n";
    } else {
      rows.push_back(Json{{"eps_sweep", v},
                          {"gamma_numeric", g},
                          {"gamma_model", model},
                          {"gamma_closed", closed ? Json(*closed) : Json(nullptr)},
                          {"rel_error", rel},
                          {"quad_order", q.theta_order},
                          {"quad_err", q.est_rel_error},
                          {"converged", numeric.converged}});
    }
  }
  o.code = converged ? kExitOk : kExitToleranceNotReached;
  if (csv) {
    o.text = std::move(text);
    return o;
  }
  Json j;
  j["command"] = "sweep";
  j["sweep_axis"] = axis_name(axis);
  Json fixed = Json::array();
  for (int i = 0; i < 3; ++i) fixed.push_back(i == axis ? Json(nullptr) : Json(*cfg.eps[i]));
  j["eps"] = fixed;
  j["dipole"] = vec_json(cfg.dipole.vec());
  j["local_field"] = cfg.local_field ? vec_json(cfg.local_field->diagonal()) : Json(nullptr);
  j["max_rel_error"] = max_rel;
  j["converged"] = converged;
  j["rows"] = rows;
  o.text = render(j);
  return o;
}

Output cmd_greens(const RunConfig& cfg) {
  const PermittivityTensor eps = cfg.tensor();
  bool converged = true;
  RateResult fermi;
  try {
    fermi = rate_numeric(eps, cfg.dipole, cfg.quadrature);
  } catch (const ToleranceNotReached& e) {
    fermi = from_best(e.best());
    converged = false;
  }
  QuadratureResult greens_q;
  try {
    greens_q = imag_greens_trace(eps, cfg.dipole, cfg.quadrature).quadrature;
  } catch (const ToleranceNotReached& e) {
    greens_q = e.best();
    converged = false;
  }
  const double gf = fermi.gamma_normalized;
  // Harness self-test: a relative shift far above kRouteTolerance.
  const double gg = cfg.inject_fault ? greens_q.value * (1.0 + 1e-6) : greens_q.value;
  const double abs_diff = std::abs(gg - gf);
  const double rel_diff = abs_diff / std::abs(gf);

  double defect = 0.0;
  int probes = 0;
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      for (int z = -1; z <= 1; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        const Direction k = Direction::normalized(x, y, z);
        defect = std::max(defect, completeness_defect(eps, k).cwiseAbs().maxCoeff());
        ++probes;
      }
    }
  }
  const bool agree = rel_diff <= kRouteTolerance;

  Output o;
  o.code = !converged ? kExitToleranceNotReached : (agree ? kExitOk : kExitRoutesDisagree);
  if (cfg.format() == OutputFormat::csv) {
    o.text = "gamma_fermi,gamma_greens,abs_difference,rel_difference,completeness_defect_max,"
             "probe_directions,agree\n" +
             csv_number(gf) + "," + csv_number(gg) + "," + csv_number(abs_diff) + "," +
             csv_number(rel_diff) + "," + csv_number(defect) + "," + std::to_string(probes) + "," +
             (agree ? "true" : "false") + "\n";
    return o;
  }
  Json j;
  j["command"] = "greens";
  j["eps"] = vec_json(eps.diagonal());
  j["dipole"] = vec_json(cfg.dipole.vec());
  j["gamma_fermi"] = gf;
  j["gamma_greens"] = gg;
  j["abs_difference"] = abs_diff;
  j["rel_difference"] = rel_diff;
  j["route_tolerance"] = kRouteTolerance;
  j["agree"] = agree;
  j["completeness_defect_max"] = defect;
  j["probe_directions"] = probes;
  j["longitudinal_contribution"] = longitudinal_contribution(eps);
  j["converged"] = converged;
  j["quadrature_fermi"] = quadrature_json(fermi.quadrature);
  j["quadrature_greens"] = quadrature_json(greens_q);
  o.text = render(j);
  return o;
}

Output cmd_validate(const RunConfig& cfg) {
  const ValidationReport report = run_validation({cfg.seed, cfg.inject_fault});
  Output o;
  o.code = report.passed ? kExitOk : kExitValidationFailed;
  if (cfg.format() == OutputFormat::csv) {
    o.text = std::string(kValidateHeader) + "\n";
    for (const auto& c : report.checks) {
      o.text += c.name + "," + std::to_string(c.samples) + "," + csv_number(c.worst_defect) + "," +
                csv_number(c.tolerance) + "," + (c.passed ? "true" : "false") + "\n";
    }
    return o;
  }
  Json j;
  j["command"] = "validate";
  j["seed"] = cfg.seed;
  j["passed"] = report.passed;
  j["checks"] = Json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back(Json{{"name", c.name},
                               {"samples", c.samples},
                               {"worst_defect", c.worst_defect},
                               {"tolerance", c.tolerance},
                               {"passed", c.passed}});
  }
  o.text = render(j);
  return o;
}

}  // namespace

// ---------------------------------------------------------------- public

std::vector<double> SweepRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = start + (stop - start) * i / (count - 1);
  v.back() = stop;
  return v;
}

PermittivityTensor RunConfig::tensor() const {
  for (int i = 0; i < 3; ++i) {
    if (!eps[i]) throw ConfigError(std::string("missing permittivity ") + axis_name(i));
  }
  return {*eps[0], *eps[1], *eps[2]};
}

OutputFormat RunConfig::format() const {
  if (output) return *output;
  return command == Command::angular || command == Command::sweep ? OutputFormat::csv : OutputFormat::json;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_number(const std::string& text, bool allow_degrees) {
  std::string_view s(text);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  bool degrees = false;
  if (allow_degrees && s.size() > 3 && s.substr(s.size() - 3) == "deg") {
    degrees = true;
    s.remove_suffix(3);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
  return degrees ? v * std::numbers::pi / 180.0 : v;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, bool allow_degrees) {
  std::vector<double> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = text.find(',', begin);
    out.push_back(parse_number(text.substr(begin, end - begin), allow_degrees));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (out.size() != expected) {
    throw ConfigError("expected " + std::to_string(expected) + " comma-separated numbers, got '" + text + "'");
  }
  return out;
}

SweepRange parse_range(const std::string& text) {
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw ConfigError("--range must be start:stop:count");
  SweepRange r;
  r.start = parse_number(text.substr(0, a));
  r.stop = parse_number(text.substr(a + 1, b - a - 1));
  r.count = parse_int(text.substr(b + 1), "--range count");
  if (r.count < 2) throw ConfigError("--range count must be >= 2");
  if (!(r.start > 0.0 && r.stop > 0.0)) throw ConfigError("--range bounds must be positive");
  return r;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Spontaneous emission rates of a dipole in an anisotropic dielectric."};
  app.name("aniso-emit");

  Settings flags;
  std::vector<std::pair<CLI::Option*, std::string>> options;
  std::deque<std::string> storage;  // stable references for CLI11
  auto add = [&](const char* flag, const char* key, const char* help) {
    auto& slot = storage.emplace_back();
    options.emplace_back(app.add_option(flag, slot, help), key);
    return options.back().first;
  };

  add("command", "command", "rate | angular | sweep | greens | validate");
  add("--config", "config", "JSON config file; flags override its keys");
  add("--eps", "eps", "Relative permittivities X,Y,Z");
  add("--eps-x", "eps_x", "Relative permittivity along x");
  add("--eps-y", "eps_y", "Relative permittivity along y");
  add("--eps-z", "eps_z", "Relative permittivity along z");
  add("--dipole", "dipole", "Dipole direction X,Y,Z (normalized; default 0,0,1)");
  add("--dipole-angles", "dipole_angles",
      "Dipole direction THETA,PHI with theta from the x axis; radians, or e.g. 30deg");
  add("--frame", "frame", "Lab-to-crystal rotation, 9 numbers row-major");
  add("--method", "method", "auto | closed | numeric | model (rate)");
  add("--tol", "tol", "Quadrature target relative tolerance (default 1e-10, env ANISO_EMIT_TOL)");
  add("--theta-rule", "theta_rule", "Initial Gauss-Legendre order (default 64)");
  add("--phi-points", "phi_points", "Initial phi points (default 128)");
  add("--max-order", "max_order", "Refinement cap on the Gauss-Legendre order (default 2048)");
  add("--sweep", "sweep", "Swept permittivity: eps_x | eps_y | eps_z");
  add("--range", "range", "Sweep range start:stop:count");
  add("--local-field", "local_field", "Diagonal local-field factors L1,L2,L3");
  add("--output", "output", "csv | json (default: csv for angular/sweep, json otherwise)");
  add("--out", "out", "Write to PATH instead of standard output");
  add("--seed", "seed", "Seed for validate (default 42)");
  add("--samples", "samples", "Number of theta samples for angular (default 181)");
  add("--omega", "omega", "Transition angular frequency in rad/s (with --si)");
  add("--dipole-si", "dipole_si", "Dipole moment in C m (with --si)");

  bool si = false;
  bool fault = false;
  auto* si_flag = app.add_flag("--si", si, "Also report the absolute rate in 1/s");
  auto* fault_flag = app.add_flag("--inject-fault", fault)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  Settings settings;
  if (const char* env = std::getenv("ANISO_EMIT_TOL"); env && *env) settings["tol"] = env;
  std::string config_path;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].second == "config" && options[i].first->count()) config_path = storage[i];
  }
  if (!config_path.empty()) load_config_file(config_path, settings);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].second != "config" && options[i].first->count()) settings[options[i].second] = storage[i];
  }
  if (si_flag->count()) settings["si"] = si ? "true" : "false";
  if (fault_flag->count()) settings["inject_fault"] = fault ? "true" : "false";
  return interpret(settings);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.local_field && (cfg.local_field->diagonal().array() < 0.0).any()) {
    err << "warning: negative local-field factor; only L^2 enters the rates\n";
  }
  Output o;
  switch (cfg.command) {
    case Command::rate: o = cmd_rate(cfg); break;
    case Command::angular: o = cmd_angular(cfg, err); break;
    case Command::sweep: o = cmd_sweep(cfg); break;
    case Command::greens: o = cmd_greens(cfg); break;
    case Command::validate: o = cmd_validate(cfg); break;
  }
  if (cfg.output_path.empty()) {
    out << o.text;
    out.flush();
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    file << o.text;
    if (!file) {
      err << "error: cannot write '" << cfg.output_path << "'\n";
      return kExitInvalidConfig;
    }
  }
  if (o.code == kExitToleranceNotReached) err << "error: quadrature tolerance not reached; printed best value\n";
  if (o.code == kExitRoutesDisagree) err << "error: Fermi and Green's routes disagree\n";
  return o.code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  try {
    return run(cfg, out, err);
  } catch (const std::invalid_argument& e) {  // includes ConfigError
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidationFailed;
  }
}

}  // namespace aniso::cli
