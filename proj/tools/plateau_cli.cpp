// plateau_cli: command-line front end for the solvers, constructors and audits.
//
//   plateau_cli <group> <command> [--field value ...] [--config FILE] [-D k=v] [--out DIR]
//   plateau_cli sweep <group> <command> --grid k=v1,v2 [--grid ...] [--jobs N] [--out DIR]
//
// Exit codes: 0 all checks pass, 1 a check failed or the numerics failed,
// 2 the configuration is invalid (the offending field is named).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "plateau/plateau.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace plateau;

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration schema

struct SchemaError : std::runtime_error {
  std::string path;
  SchemaError(std::string p, const std::string& msg) : std::runtime_error(msg), path(std::move(p)) {}
};

enum class FieldType { number, integer, boolean, text, number_list };

struct Field {
  std::string name;
  FieldType type;
  json def;  // null: optional without default
  std::string help;
  std::vector<std::string> choices = {};
};

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

std::string key_name(std::string flag) {
  while (!flag.empty() && flag.front() == '-') flag.erase(flag.begin());
  std::replace(flag.begin(), flag.end(), '-', '_');
  return flag;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& path, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw SchemaError(path, "expected a finite number, got \"" + s + "\"");
  return v;
}

/// Converts a raw value (string from flags or key=value files, or any JSON
/// value) to the field's type.
json coerce(const Field& f, const json& raw, const std::string& path) {
  if (raw.is_null()) return raw;
  const bool str = raw.is_string();
  const std::string s = str ? raw.get<std::string>() : std::string();
  switch (f.type) {
    case FieldType::number:
      if (raw.is_number()) return raw.get<double>();
      if (str) return parse_number(path, s);
      break;
    case FieldType::integer: {
      double v = 0.0;
      if (raw.is_number()) v = raw.get<double>();
      else if (str) v = parse_number(path, s);
      else break;
      if (v != std::floor(v) || std::abs(v) > 1e15) throw SchemaError(path, "expected an integer");
      return static_cast<std::int64_t>(v);
    }
    case FieldType::boolean:
      if (raw.is_boolean()) return raw;
      if (str) {
        const std::string t = trim(s);
        if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
        if (t == "false" || t == "0" || t == "no" || t == "off") return false;
        throw SchemaError(path, "expected true or false, got \"" + s + "\"");
      }
      break;
    case FieldType::text:
      if (str) {
        if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), trim(s)) == f.choices.end()) {
          std::string all;
          for (const auto& c : f.choices) all += (all.empty() ? "" : ", ") + c;
          throw SchemaError(path, "\"" + s + "\" is not one of {" + all + "}");
        }
        return trim(s);
      }
      break;
    case FieldType::number_list: {
      std::vector<double> out;
      if (raw.is_array()) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
          if (!raw[i].is_number()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
          out.push_back(raw[i].get<double>());
        }
      } else if (str) {
        std::stringstream ss(s);
        std::string item;
        int i = 0;
        while (std::getline(ss, item, ','))
          out.push_back(parse_number(path + "[" + std::to_string(i++) + "]", item));
      } else {
        break;
      }
      if (out.empty()) throw SchemaError(path, "expected a non-empty list");
      return out;
    }
  }
  throw SchemaError(path, "wrong type " + std::string(raw.type_name()));
}

/// Resolved, typed configuration of one run.
class Config {
 public:
  Config(std::string command, json values) : command_(std::move(command)), v_(std::move(values)) {}

  const std::string& command() const { return command_; }
  const json& values() const { return v_; }
  bool has(const std::string& k) const { return v_.contains(k) && !v_.at(k).is_null(); }
  double num(const std::string& k) const { return get(k).get<double>(); }
  int integer(const std::string& k) const { return int(get(k).get<std::int64_t>()); }
  bool flag(const std::string& k) const { return get(k).get<bool>(); }
  std::string text(const std::string& k) const { return get(k).get<std::string>(); }
  std::vector<double> list(const std::string& k) const { return get(k).get<std::vector<double>>(); }

  EnergyParams params() const {
    EnergyParams p{num("sigma"), num("eta"), num("alpha"), num("beta")};
    p.allow_nonphysical = flag("allow_nonphysical");
    return p;
  }
  Sheet sheet() const {
    const int s = integer("sheet");
    if (s != 1 && s != -1) throw SchemaError("sheet", "must be 1 or -1");
    return s > 0 ? Sheet::plus : Sheet::minus;
  }

 private:
  const json& get(const std::string& k) const {
    if (!has(k)) throw SchemaError(k, "required field is missing");
    return v_.at(k);
  }
  std::string command_;
  json v_;
};

// ---------------------------------------------------------------------------
// Artifacts and provenance

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f << content;
    artifacts_[name] = hex64(fnv1a(content));
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  template <class F>
  void write_with(const std::string& name, F&& f) {
    std::ostringstream os;
    f(os);
    write(name, os.str());
  }

  json result = json::object();     // printed to stdout
  json residuals = json::object();  // copied into the provenance record
  const fs::path& dir() const { return dir_; }
  const std::map<std::string, std::string>& artifacts() const { return artifacts_; }

 private:
  fs::path dir_;
  std::map<std::string, std::string> artifacts_;
};

json versions() {
  return {{"plateau", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION},
          {"compiler", __VERSION__}};
}

json params_json(const EnergyParams& p) {
  return {{"sigma", p.sigma}, {"eta", p.eta}, {"alpha", p.alpha}, {"beta", p.beta},
          {"allow_nonphysical", p.allow_nonphysical}};
}

/// Report records as {name: {value, reference, residual, tolerance, pass}}.
json residuals_of(const audit::AuditReport& r) { return r.to_json(); }

int report_exit(const audit::AuditReport& r) { return r.all_pass() ? 0 : 1; }

// ---------------------------------------------------------------------------
// Commands

struct Command {
  std::string group, name, help;
  std::vector<Field> fields;
  std::function<int(const Config&, Outputs&)> run;
  std::string full() const { return group + " " + name; }
};

std::vector<Field> param_fields(double sigma, double eta, double alpha, double beta) {
  return {{"sigma", FieldType::number, sigma, "surface tension"},
          {"eta", FieldType::number, eta, "saddle-splay modulus"},
          {"alpha", FieldType::number, alpha, "flexural rigidity"},
          {"beta", FieldType::number, beta, "edge tension"},
          {"allow_nonphysical", FieldType::boolean, false, "accept sigma <= 0 or alpha < 0"}};
}

std::vector<Field> operator+(std::vector<Field> a, const std::vector<Field>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<std::string> kFixtures{"disk", "annulus", "cap", "hemisphere", "helicoid", "fitted-helicoid"};

std::vector<Field> fixture_fields() {
  return {{"fixture", FieldType::text, "disk", "surface fixture", kFixtures},
          {"R", FieldType::number, 1.0, "disk radius"},
          {"r0", FieldType::number, 1.0, "inner radius (annulus, helicoid)"},
          {"r1", FieldType::number, 2.0, "outer radius (annulus, helicoid)"},
          {"a", FieldType::number, 1.0, "helicoid pitch"},
          {"t0", FieldType::number, 1.0, "polar angle of the spherical cap"},
          {"sheet", FieldType::integer, 1, "contact-angle sheet, 1 or -1"},
          {"mode", FieldType::text, "same_sign", "helicoid fit sign mode", {"same_sign", "oriented"}}};
}

/// Builds the fixture; the fitted helicoid replaces sigma and eta with the
/// fitted values.
audit::Configuration make_fixture(const Config& c, EnergyParams& p, json& info) {
  const std::string f = c.text("fixture");
  info["fixture"] = f;
  if (f == "disk") return audit::disk_configuration(c.num("R"));
  if (f == "annulus") return audit::annulus_configuration(c.num("r0"), c.num("r1"));
  if (f == "cap") return audit::cap_configuration(c.num("t0"));
  if (f == "hemisphere") return audit::cap_configuration(pi / 2);
  if (f == "helicoid") return audit::helicoid_configuration(c.num("a"), c.num("r0"), c.num("r1"));
  const auto mode = c.text("mode") == "oriented" ? bjorling::HelicoidFitMode::oriented
                                                 : bjorling::HelicoidFitMode::same_sign;
  const auto fit =
      bjorling::fit_helicoid_params(c.num("a"), c.num("r0"), c.num("r1"), p.alpha, p.beta, c.sheet(), mode);
  p.sigma = fit.sigma;
  p.eta = fit.eta;
  p.allow_nonphysical = p.allow_nonphysical || !fit.valid;
  info["fit"] = {{"sigma", fit.sigma}, {"eta", fit.eta}, {"valid", fit.valid}};
  return audit::fitted_helicoid_configuration(c.num("a"), c.num("r0"), c.num("r1"), fit);
}

json roots_json(const elastica::CircleRoots& r) {
  json roots = json::array();
  for (const auto& x : r.roots)
    roots.push_back({{"kappa", x.kappa}, {"multiplicity", x.multiplicity}, {"residual", x.residual}});
  return {{"case", elastica::to_string(r.kind)}, {"discriminant", r.discriminant}, {"roots", roots}};
}

audit::AuditReport bjorling_report(const bjorling::BjorlingAudit& a, double h_tol) {
  audit::AuditReport r;
  r.bound("bjorling.row_vs_curve", a.row_vs_curve, 1e-10);
  r.bound("bjorling.real_axis_imag", a.real_axis_imag, 1e-10);
  r.bound("bjorling.normal_vs_B", a.normal_vs_B, 1e-8);
  r.bound("bjorling.core_kappa_n", a.core_kappa_n, 1e-8);
  r.bound("bjorling.grid_H", a.grid.max_abs_H, h_tol);
  r.bound("bjorling.quadrature_error", a.quadrature_error, 1e-10);
  if (a.core_tangential) r.bound("bjorling.core_frenet_tangential", *a.core_tangential, 1e-8);
  if (a.core_normal) r.bound("bjorling.core_frenet_normal", *a.core_normal, 1e-8);
  r.add("bjorling.jet_H", a.max_H_jet, 0.0, std::numeric_limits<double>::infinity());
  return r;
}

std::vector<Command> commands() {
  std::vector<Command> cs;

  // -- elastica -------------------------------------------------------------
  cs.push_back({"elastica", "circles", "real roots of alpha k^3 - beta k + sigma", param_fields(1, 0, 1, 0),
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  const auto r = elastica::circle_roots(p);
                  out.result = {{"params", params_json(p)}};
                  out.result.update(roots_json(r));
                  double worst = 0;
                  for (const auto& x : r.roots) worst = std::max(worst, x.residual);
                  out.residuals["max_root_residual"] = worst;
                  out.write_json("circles.json", out.result);
                  return 0;
                }});

  cs.push_back({"elastica", "integrate", "integrate the curvature ODE and reconstruct the planar curve",
                param_fields(1, 0, 1, 3) + std::vector<Field>{
                    {"kg0", FieldType::number, 0.9, "initial geodesic curvature"},
                    {"kgp0", FieldType::number, 0.0, "initial derivative"},
                    {"length", FieldType::number, 10.0, "arc length"},
                    {"step", FieldType::number, 1e-3, "RK4 step"},
                    {"drift_tol", FieldType::number, 1e-9, "relative first-integral drift tolerance"}},
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  const auto sol = elastica::elastica_integrate(p, c.num("kg0"), c.num("kgp0"), c.num("length"),
                                                                c.num("step"));
                  const auto curve = elastica::elastica_to_curve(sol);
                  out.write_with("elastica.csv", [&](std::ostream& os) {
                    std::vector<std::vector<double>> rows;
                    for (const auto& s : sol.samples) rows.push_back({s.s, s.kappa_g, s.kappa_g_prime});
                    geom::write_csv(os, {"s", "kg", "kgp"}, rows);
                  });
                  out.write_with("curve.csv", [&](std::ostream& os) { geom::write_curve_csv(os, curve); });
                  out.residuals = {{"relative_d_drift", sol.relative_drift()}, {"closure_gap", curve.closure_gap}};
                  out.result = {{"params", params_json(p)},
                                {"d", sol.d},
                                {"period", sol.period ? json(*sol.period) : json(nullptr)},
                                {"turning_number", elastica::turning_number(sol)},
                                {"closed", curve.closed},
                                {"residuals", out.residuals}};
                  out.write_json("elastica.json", out.result);
                  return sol.relative_drift() <= c.num("drift_tol") ? 0 : 1;
                }});

  cs.push_back({"elastica", "ring", "shoot for a closed buckled ring",
                param_fields(1, 0, 1, 3) + std::vector<Field>{
                    {"turning", FieldType::integer, 1, "turning number"},
                    {"kg0", FieldType::number, json(), "curvature at a turning point (default: negative circle root)"},
                    {"lobes", FieldType::integer, 1, "curvature periods in the ring"},
                    {"period", FieldType::number, json(), "initial period guess"}},
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  elastica::RingGuess g;
                  if (c.has("kg0")) {
                    g.kappa_g0 = c.num("kg0");
                  } else {
                    const auto roots = elastica::circle_roots(p);
                    g.kappa_g0 = roots.roots.front().kappa;
                  }
                  g.lobes = c.integer("lobes");
                  if (c.has("period")) g.period = c.num("period");
                  const auto ring = elastica::buckled_ring_shoot(p, c.integer("turning"), g);
                  out.write_with("ring.csv", [&](std::ostream& os) { geom::write_curve_csv(os, ring.curve); });
                  out.residuals = {{"closure_gap", ring.closure_gap},
                                   {"ode_residual", ring.ode_residual},
                                   {"periodicity_residual", ring.periodicity_residual},
                                   {"curvature_residual", ring.curvature_residual}};
                  out.result = {{"params", params_json(p)},        {"iterations", ring.iterations},
                                {"circular", ring.circular},       {"lobes", ring.lobes},
                                {"period", ring.period},           {"turning_number", ring.turning_number},
                                {"residuals", out.residuals}};
                  out.write_json("ring.json", out.result);
                  return 0;
                }});

  // -- boundary -------------------------------------------------------------
  const auto traj_fields = param_fields(1, 1, 1, 0) + std::vector<Field>{
      {"kg0", FieldType::number, 0.5, "initial geodesic curvature"},
      {"kgp0", FieldType::number, 0.0, "initial derivative"},
      {"tg0", FieldType::number, 0.2, "initial geodesic torsion"},
      {"sheet", FieldType::integer, 1, "contact-angle sheet, 1 or -1"},
      {"length", FieldType::number, 10.0, "arc length"},
      {"step", FieldType::number, 1e-3, "RK4 step"}};

  cs.push_back({"boundary", "integrate", "integrate the boundary system with the torsion first integral",
                traj_fields + std::vector<Field>{{"drift_tol", FieldType::number, 1e-9, "relative drift of c"}},
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  auto tr = boundary::boundary_integrate(p, {0.0, c.num("kg0"), c.num("kgp0"), c.num("tg0")},
                                                         c.num("length"), c.num("step"));
                  tr.sheet = c.sheet();
                  const auto inv = boundary::torsion_invariant(p, tr);
                  const auto res = boundary::trajectory_residuals(tr);
                  const auto tag = boundary::classify_branch(p, tr);
                  out.write_with("trajectory.csv", [&](std::ostream& os) {
                    std::vector<std::vector<double>> rows;
                    for (const auto& s : tr.states) rows.push_back({s.s, s.kappa_g, s.kappa_g_prime, s.tau_g});
                    geom::write_csv(os, {"s", "kg", "kgp", "tg"}, rows);
                  });
                  out.residuals = {{"c_relative_drift", inv.relative_drift()},
                                   {"tangential", res.tangential},
                                   {"normal", res.normal},
                                   {"frenet_tangential", res.frenet_tangential},
                                   {"frenet_normal", res.frenet_normal}};
                  out.result = {{"params", params_json(p)},
                                {"c", inv.c},
                                {"sheet", c.integer("sheet")},
                                {"branch", boundary::to_string(tag.branch)},
                                {"residuals", out.residuals}};
                  out.write_json("trajectory.json", out.result);
                  return inv.relative_drift() <= c.num("drift_tol") ? 0 : 1;
                }});

  cs.push_back({"boundary", "classify", "classify a trajectory as TAU_G_ZERO, CONST_KG or GENERIC",
                traj_fields + std::vector<Field>{
                    {"tol_tau_g", FieldType::number, json(), "tolerance on max |tau_g|"},
                    {"tol_chart", FieldType::number, json(), "tolerance on max |2 alpha kg + eta|"}},
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  const auto tr = boundary::boundary_integrate(
                      p, {0.0, c.num("kg0"), c.num("kgp0"), c.num("tg0")}, c.num("length"), c.num("step"));
                  boundary::BranchTolerances tol;
                  if (c.has("tol_tau_g")) tol.tau_g = c.num("tol_tau_g");
                  if (c.has("tol_chart")) tol.chart = c.num("tol_chart");
                  const auto tag = boundary::classify_branch(p, tr, tol);
                  out.result = {{"params", params_json(p)},
                                {"branch", boundary::to_string(tag.branch)},
                                {"max_tau_g", tag.max_tau_g},
                                {"max_chart", tag.max_chart},
                                {"param_residual", tag.param_residual ? json(*tag.param_residual) : json(nullptr)}};
                  out.residuals = {{"max_tau_g", tag.max_tau_g}, {"max_chart", tag.max_chart}};
                  out.write_json("branch.json", out.result);
                  return 0;
                }});

  cs.push_back({"boundary", "alpha-zero", "critical disk for alpha = 0", param_fields(1, 1, 0, -2),
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  const auto s = boundary::alpha_zero_solution(p);
                  out.result = {{"params", params_json(p)}, {"radius", s.radius}, {"valid", s.valid},
                                {"kappa_g", s.valid ? json(s.kappa_g) : json(nullptr)},
                                {"residual", s.valid ? json(s.residual) : json(nullptr)}, {"reason", s.reason}};
                  if (s.valid) {
                    const auto el = audit::el_residuals(audit::disk_configuration(s.radius), p, {.tolerance = 1e-10});
                    out.result["el"] = residuals_of(el);
                    out.residuals = residuals_of(el);
                    out.write_json("alpha_zero.json", out.result);
                    return report_exit(el);
                  }
                  out.write_json("alpha_zero.json", out.result);
                  return 1;
                }});

  // -- bjorling ---------------------------------------------------------------
  const std::vector<Field> strip_fields{{"S", FieldType::number, 2 * pi, "core length"},
                                        {"T", FieldType::number, 0.3, "strip half-width (shrunk on blow-up)"},
                                        {"ns", FieldType::integer, 400, "intervals along the core"},
                                        {"nt", FieldType::integer, 100, "intervals across the strip"},
                                        {"h_tol", FieldType::number, 1e-5, "tolerance on interior |H|"},
                                        {"write_strip", FieldType::boolean, true, "write the strip CSV"}};

  cs.push_back({"bjorling", "build", "continue a boundary-system core and build the Bjorling surface",
                param_fields(1, -5, 1, 1) + std::vector<Field>{
                    {"kg0", FieldType::number, 1.0, "initial geodesic curvature"},
                    {"kgp0", FieldType::number, 0.0, "initial derivative"},
                    {"tg0", FieldType::number, 0.5, "initial geodesic torsion"},
                    {"sheet", FieldType::integer, 1, "contact-angle sheet, 1 or -1"}} + strip_fields,
                [](const Config& c, Outputs& out) {
                  const auto p = c.params();
                  const auto model =
                      bjorling::CoreModel::from_boundary(p, {0.0, c.num("kg0"), c.num("kgp0"), c.num("tg0")}, c.sheet());
                  auto strip = bjorling::continue_adaptive(model, c.num("S"), c.num("T"), c.integer("ns"), c.integer("nt"));
                  const auto surf = bjorling::bjorling_surface(std::move(strip));
                  const auto rep = bjorling_report(surf.audit, c.num("h_tol"));
                  if (c.flag("write_strip"))
                    out.write_with("strip.csv", [&](std::ostream& os) { bjorling::write_strip_csv(os, *surf.strip); });
                  out.write_with("surface.obj", [&](std::ostream& os) { geom::write_obj(os, surf.mesh); });
                  out.residuals = residuals_of(rep);
                  out.result = {{"params", params_json(p)}, {"T_used", surf.strip->T}, {"audit", out.residuals}};
                  out.write_json("audit.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"bjorling", "fig1", "build one of the three reference surfaces",
                std::vector<Field>{{"set", FieldType::integer, 1, "reference set 1, 2 or 3"}} + strip_fields,
                [](const Config& c, Outputs& out) {
                  const auto set = bjorling::reference_set(c.integer("set"));
                  bjorling::ReferenceOptions opt;
                  opt.S = c.num("S");
                  opt.T = c.num("T");
                  opt.ns = c.integer("ns");
                  opt.nt = c.integer("nt");
                  const auto ref = bjorling::build_reference(set, opt);
                  auto rep = bjorling_report(ref.surface.audit, c.num("h_tol"));
                  rep.flag("bjorling.H_decreases", ref.refinement.back() < ref.refinement.front());
                  const std::string stem = "fig1_set" + std::to_string(set.id);
                  if (c.flag("write_strip"))
                    out.write_with(stem + "_strip.csv",
                                   [&](std::ostream& os) { bjorling::write_strip_csv(os, *ref.surface.strip); });
                  out.write_with(stem + ".obj", [&](std::ostream& os) { geom::write_obj(os, ref.surface.mesh); });
                  out.residuals = residuals_of(rep);
                  out.result = {{"set", set.id},
                                {"params", params_json(set.params)},
                                {"initial_state", {{"kg", set.state0.kappa_g}, {"kgp", set.state0.kappa_g_prime},
                                                   {"tg", set.state0.tau_g}}},
                                {"T_used", ref.T_used},
                                {"grid_H_refinement", ref.refinement},
                                {"critical", ref.critical},
                                {"notes", ref.set.notes},
                                {"audit", out.residuals}};
                  out.write_json(stem + ".json", out.result);
                  return report_exit(rep) == 0 && ref.critical ? 0 : 1;
                }});

  // -- helicoid ---------------------------------------------------------------
  cs.push_back({"helicoid", "make", "helicoid annulus mesh with boundary Darboux data",
                std::vector<Field>{{"a", FieldType::number, 1.0, "pitch"},
                                   {"b", FieldType::number, 0.0, "vertical offset"},
                                   {"r0", FieldType::number, 1.0, "inner radius"},
                                   {"r1", FieldType::number, 2.0, "outer radius"},
                                   {"theta_max", FieldType::number, 2 * pi, "angular extent"},
                                   {"nu", FieldType::integer, 9, "radial vertices"},
                                   {"nv", FieldType::integer, 65, "angular vertices"},
                                   {"conformal", FieldType::boolean, false, "use r = |a| sinh u"},
                                   {"samples", FieldType::integer, 256, "Darboux samples per boundary"}},
                [](const Config& c, Outputs& out) {
                  const bjorling::HelicoidPatch h(c.num("a"), c.num("b"), c.num("r0"), c.num("r1"),
                                                  c.num("theta_max"), c.flag("conformal"));
                  const auto mesh = geom::mesh_from_patch(h, c.integer("nu"), c.integer("nv"));
                  out.write_with("helicoid.obj", [&](std::ostream& os) { geom::write_obj(os, mesh); });
                  audit::AuditReport rep;
                  const double step = h.theta_max() / c.integer("samples");
                  for (auto [name, path, r] : {std::tuple{"inner", h.inner_path(), h.r0()},
                                               std::tuple{"outer", h.outer_path(), h.r1()}}) {
                    const auto d = geom::darboux_from_patch(h, path, step);
                    out.write_with(std::string("helicoid_") + name + ".csv",
                                   [&](std::ostream& os) { geom::write_darboux_csv(os, d); });
                    const auto ref = bjorling::helicoid_helix_data(h.a(), r);
                    const double sgn = std::string(name) == "inner" ? -1.0 : 1.0;  // inner runs backwards
                    double ekg = 0, ekn = 0, etg = 0;
                    for (const auto& s : d.samples) {
                      ekg = std::max(ekg, std::abs(s.kappa_g - sgn * ref.kappa_g));
                      ekn = std::max(ekn, std::abs(s.kappa_n));
                      etg = std::max(etg, std::abs(s.tau_g - ref.tau_g));
                    }
                    rep.bound(std::string("helicoid.") + name + ".kappa_g", ekg, 1e-8);
                    rep.bound(std::string("helicoid.") + name + ".kappa_n", ekn, 1e-8);
                    rep.bound(std::string("helicoid.") + name + ".tau_g", etg, 1e-8);
                  }
                  out.residuals = residuals_of(rep);
                  out.result = {{"a", h.a()},
                                {"r0", h.r0()},
                                {"r1", h.r1()},
                                {"area", h.area()},
                                {"inner", {{"kappa_g", -bjorling::helicoid_helix_data(h.a(), h.r0()).kappa_g},
                                           {"tau_g", bjorling::helicoid_helix_data(h.a(), h.r0()).tau_g}}},
                                {"outer", {{"kappa_g", bjorling::helicoid_helix_data(h.a(), h.r1()).kappa_g},
                                           {"tau_g", bjorling::helicoid_helix_data(h.a(), h.r1()).tau_g}}},
                                {"vertices", mesh.vertices.size()},
                                {"audit", out.residuals}};
                  out.write_json("helicoid.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"helicoid", "fit", "fit (sigma, eta) so helicoid boundaries are critical",
                std::vector<Field>{{"a", FieldType::number, 1.0, "pitch"},
                                   {"r0", FieldType::number, 1.0, "inner radius"},
                                   {"r1", FieldType::number, 2.0, "outer radius"},
                                   {"boundaries", FieldType::integer, 2, "fit both boundaries (2) or only r0 at a given eta (1)"},
                                   {"alpha", FieldType::number, 1.0, "flexural rigidity"},
                                   {"beta", FieldType::number, -1.0, "edge tension"},
                                   {"eta", FieldType::number, json(), "saddle-splay modulus (single-boundary fit)"},
                                   {"sheet", FieldType::integer, -1, "contact-angle sheet, 1 or -1"},
                                   {"mode", FieldType::text, "same_sign", "kappa_g sign mode", {"same_sign", "oriented"}}},
                [](const Config& c, Outputs& out) {
                  bjorling::HelicoidFit f;
                  const int nb = c.integer("boundaries");
                  if (nb != 1 && nb != 2) throw SchemaError("boundaries", "must be 1 or 2");
                  const bool two = nb == 2;
                  if (two) {
                    const auto mode = c.text("mode") == "oriented" ? bjorling::HelicoidFitMode::oriented
                                                                   : bjorling::HelicoidFitMode::same_sign;
                    f = bjorling::fit_helicoid_params(c.num("a"), c.num("r0"), c.num("r1"), c.num("alpha"),
                                                      c.num("beta"), c.sheet(), mode);
                  } else {
                    if (!c.has("eta")) throw SchemaError("eta", "required for the single-boundary fit");
                    f = bjorling::fit_helicoid_single(c.num("a"), c.num("r0"), c.num("alpha"), c.num("beta"),
                                                      c.num("eta"), c.sheet());
                  }
                  out.result = {{"sigma", f.sigma},       {"eta", f.eta},           {"valid", f.valid},
                                {"kappa_g0", f.kappa_g0}, {"kappa_g1", f.kappa_g1}, {"tau_g0", f.tau_g0},
                                {"tau_g1", f.tau_g1},     {"determinant", two ? json(f.determinant) : json(nullptr)}};
                  if (two && f.valid) {
                    const EnergyParams p{f.sigma, f.eta, c.num("alpha"), c.num("beta")};
                    const auto el = audit::el_residuals(
                        audit::fitted_helicoid_configuration(c.num("a"), c.num("r0"), c.num("r1"), f), p,
                        {.tolerance = 1e-10});
                    out.result["el"] = residuals_of(el);
                    out.residuals = residuals_of(el);
                  }
                  out.write_json("fit.json", out.result);
                  return f.valid ? 0 : 1;
                }});

  // -- audit ------------------------------------------------------------------
  const auto audit_fields = param_fields(1, 0, 1, 0) + fixture_fields();

  cs.push_back({"audit", "energy", "energy terms of a fixture or an OBJ mesh",
                audit_fields + std::vector<Field>{{"in", FieldType::text, json(), "OBJ mesh (overrides the fixture)"}},
                [](const Config& c, Outputs& out) {
                  auto p = c.params();
                  json info;
                  audit::EnergyTerms e;
                  if (c.has("in")) {
                    info["input"] = fs::path(c.text("in")).filename().string();
                    e = audit::energy_terms(geom::read_obj_file(c.text("in")), p);
                  } else {
                    const auto conf = make_fixture(c, p, info);
                    e = audit::energy_terms(conf, p);
                  }
                  out.result = {{"params", params_json(p)}, {"source", info},   {"area", e.area},
                                {"total_K", e.total_K},     {"length", e.length}, {"bending", e.bending},
                                {"area_term", e.area_term}, {"gauss_term", e.gauss_term},
                                {"bend_term", e.bend_term}, {"total", e.total}};
                  out.write_json("energy.json", out.result);
                  return 0;
                }});

  cs.push_back({"audit", "el", "Euler-Lagrange residuals on a fixture",
                audit_fields + std::vector<Field>{{"tol", FieldType::number, 1e-8, "residual tolerance"},
                                                  {"samples", FieldType::integer, 256, "samples per boundary"}},
                [](const Config& c, Outputs& out) {
                  auto p = c.params();
                  json info;
                  const auto conf = make_fixture(c, p, info);
                  const auto rep = audit::el_residuals(conf, p, {.samples = c.integer("samples"), .tolerance = c.num("tol")});
                  out.residuals = residuals_of(rep);
                  out.result = {{"params", params_json(p)}, {"source", info}, {"audit", out.residuals}};
                  out.write_json("el.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"audit", "scaling", "2 sigma A against oint (alpha kappa^2 - beta) ds",
                audit_fields + std::vector<Field>{{"tol", FieldType::number, 1e-10, "residual tolerance"}},
                [](const Config& c, Outputs& out) {
                  auto p = c.params();
                  json info;
                  const auto conf = make_fixture(c, p, info);
                  const auto rep = audit::scaling_identity_check(conf, p, c.num("tol"));
                  out.residuals = residuals_of(rep);
                  out.result = {{"params", params_json(p)}, {"source", info}, {"audit", out.residuals}};
                  out.write_json("scaling.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"audit", "gauss-bonnet", "discrete (mesh) or smooth Gauss-Bonnet check",
                std::vector<Field>{
                    {"in", FieldType::text, json(), "OBJ mesh"},
                    {"fixture", FieldType::text, "disk-mesh", "fixture when no mesh is given",
                     {"disk-mesh", "holed-square", "sphere-octant", "annulus-mesh", "disk", "cap", "helicoid"}},
                    {"n", FieldType::integer, 12, "mesh resolution or base midpoint level"},
                    {"holes", FieldType::integer, 2, "holes in the holed-square fixture"},
                    {"t0", FieldType::number, 1.0, "cap polar angle"},
                    {"a", FieldType::number, 1.0, "helicoid pitch"},
                    {"r0", FieldType::number, 1.0, "inner radius"},
                    {"r1", FieldType::number, 2.0, "outer radius"},
                    {"tol", FieldType::number, 1e-10, "discrete residual tolerance"},
                    {"write_mesh", FieldType::boolean, false, "write the fixture mesh as mesh.obj"}},
                [](const Config& c, Outputs& out) {
                  audit::AuditReport rep;
                  json info;
                  const std::string f = c.text("fixture");
                  const int n = c.integer("n");
                  if (!c.has("in") && (f == "disk" || f == "cap" || f == "helicoid")) {
                    const auto conf = f == "disk"  ? audit::disk_configuration(1.0)
                                      : f == "cap" ? audit::cap_configuration(c.num("t0"))
                                                   : audit::helicoid_configuration(c.num("a"), c.num("r0"), c.num("r1"));
                    info["fixture"] = f;
                    rep = audit::smooth_gauss_bonnet_check(conf, n);
                  } else {
                    geom::TriMesh mesh;
                    if (c.has("in")) {
                      info["input"] = fs::path(c.text("in")).filename().string();
                      mesh = geom::read_obj_file(c.text("in"));
                    } else {
                      info["fixture"] = f;
                      if (f == "disk-mesh") mesh = geom::disk_mesh(1.0, n);
                      else if (f == "holed-square") mesh = geom::holed_square_mesh(n, c.integer("holes"));
                      else if (f == "sphere-octant") mesh = geom::sphere_octant_mesh(n);
                      else mesh = geom::mesh_from_patch(geom::PlanarAnnulusPatch(c.num("r0"), c.num("r1")), n, 4 * n,
                                                        {.periodic_v = true});
                    }
                    if (c.flag("write_mesh")) out.write_with("mesh.obj", [&](std::ostream& os) { geom::write_obj(os, mesh); });
                    rep = audit::gauss_bonnet_check(mesh, c.num("tol"));
                    info["loops"] = mesh.boundary_loops.size();
                  }
                  out.residuals = residuals_of(rep);
                  out.result = {{"source", info}, {"audit", out.residuals}};
                  out.write_json("gauss_bonnet.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"audit", "flux", "torsion flux through both boundaries of a conformal annulus",
                std::vector<Field>{{"fixture", FieldType::text, "helicoid", "annulus fixture", {"helicoid", "annulus"}},
                                   {"a", FieldType::number, 1.0, "helicoid pitch"},
                                   {"r0", FieldType::number, 1.0, "inner radius"},
                                   {"r1", FieldType::number, 2.0, "outer radius"},
                                   {"conformal", FieldType::boolean, true, "conformal parameterization"},
                                   {"tol", FieldType::number, 1e-10, "tolerance on the flux difference"}},
                [](const Config& c, Outputs& out) {
                  std::unique_ptr<geom::ParamPatch> patch;
                  if (c.text("fixture") == "helicoid")
                    patch = std::make_unique<bjorling::HelicoidPatch>(c.num("a"), 0.0, c.num("r0"), c.num("r1"), 2 * pi,
                                                                      c.flag("conformal"));
                  else
                    patch = std::make_unique<geom::PlanarAnnulusPatch>(c.num("r0"), c.num("r1"));
                  const auto f = audit::torsion_flux(*patch);
                  const auto rep = audit::torsion_flux_check(*patch, c.num("tol"));
                  out.residuals = residuals_of(rep);
                  out.result = {{"fixture", c.text("fixture")},
                                {"flux", f.flux},
                                {"difference", f.difference},
                                {"same_strict_sign", f.same_strict_sign},
                                {"audit", out.residuals}};
                  out.write_json("flux.json", out.result);
                  return report_exit(rep);
                }});

  cs.push_back({"audit", "variation", "variation of the total geodesic curvature against its boundary formula",
                std::vector<Field>{
                    {"fixture", FieldType::text, "disk", "base surface", {"disk", "helicoid", "curved-disk"}},
                    {"field", FieldType::text, "random", "variation field", {"random", "translation", "rotation", "bump"}},
                    {"seed", FieldType::integer, 1, "seed of the random field (PLATEAU_SEED overrides)"},
                    {"epsilons", FieldType::number_list, std::vector<double>{1e-2, 5e-3, 2.5e-3}, "decreasing steps"},
                    {"R", FieldType::number, 1.0, "disk radius"},
                    {"a", FieldType::number, 1.0, "helicoid pitch"},
                    {"r0", FieldType::number, 1.0, "inner radius"},
                    {"r1", FieldType::number, 2.0, "outer radius"},
                    {"samples", FieldType::integer, 400, "boundary samples"},
                    {"min_order", FieldType::number, 1.9, "required observed order"}},
                [](const Config& c, Outputs& out) {
                  const std::string fx = c.text("fixture");
                  audit::Configuration conf;
                  double z_scale = 1.0;
                  if (fx == "disk") {
                    conf = audit::disk_configuration(c.num("R"));
                  } else if (fx == "helicoid") {
                    conf = audit::helicoid_configuration(c.num("a"), c.num("r0"), c.num("r1"));
                    z_scale = 1.0 / c.num("a");
                  } else {
                    auto base = std::make_shared<audit::PerturbedPatch>(std::make_shared<geom::DiskPatch>(c.num("R")),
                                                                        audit::random_trig_field(3, 2, 1, 1.0, 0.4), 1.0);
                    conf = {base, {geom::UvPath::v_line(c.num("R"), 0.0, 2 * pi, true)}, Vec3::Zero(), "curved_disk", 1};
                  }
                  const std::string fl = c.text("field");
                  const auto seed = std::uint64_t(c.integer("seed"));
                  const auto field = fl == "translation" ? audit::translation_field({0.3, -0.2, 0.5})
                                     : fl == "rotation"  ? audit::rotation_field({0.0, 0.0, 0.7})
                                     : fl == "bump"      ? audit::disk_bump_field(c.num("R"))
                                                         : audit::random_trig_field(seed, 3, 2, z_scale);
                  audit::VariationOptions o;
                  o.epsilons = c.list("epsilons");
                  o.samples = c.integer("samples");
                  o.min_order = c.num("min_order");
                  const bool zero = fl != "random";
                  const auto rep = audit::geodesic_variation_check(conf, field, zero, o);
                  out.residuals = residuals_of(rep);
                  out.result = {{"fixture", fx}, {"field", fl}, {"seed", seed}, {"audit", out.residuals}};
                  out.write_json("variation.json", out.result);
                  return report_exit(rep);
                }});

  return cs;
}

// ---------------------------------------------------------------------------
// Config assembly

/// key=value lines ('#' comments) or a JSON object.
json read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("config", "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      json j = json::parse(t);
      if (!j.is_object()) throw SchemaError("config", "top level must be an object");
      return j;
    } catch (const json::parse_error& e) {
      throw SchemaError("config", path + ": " + e.what());
    }
  }
  json j = json::object();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError("config", path + ":" + std::to_string(lineno) + ": expected key=value");
    j[key_name(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }
  return j;
}

/// Defaults < config file < --define < flags < PLATEAU_SEED.
Config resolve(const Command& cmd, const json& file, const json& overrides) {
  json merged = json::object();
  for (const auto& f : cmd.fields) merged[f.name] = f.def;
  auto apply = [&](const json& src) {
    for (const auto& [k, v] : src.items()) {
      if (k == "command") continue;
      const auto it = std::find_if(cmd.fields.begin(), cmd.fields.end(), [&](const Field& f) { return f.name == k; });
      if (it == cmd.fields.end()) throw SchemaError(k, "unknown field for '" + cmd.full() + "'");
      merged[k] = coerce(*it, v, k);
    }
  };
  if (file.contains("command") && file["command"].get<std::string>() != cmd.full())
    throw SchemaError("command", "config is for '" + file["command"].get<std::string>() + "', not '" + cmd.full() + "'");
  apply(file);
  apply(overrides);
  if (const char* env = std::getenv("PLATEAU_SEED"); env && merged.contains("seed")) {
    const auto it = std::find_if(cmd.fields.begin(), cmd.fields.end(), [](const Field& f) { return f.name == "seed"; });
    merged["seed"] = coerce(*it, std::string(env), "PLATEAU_SEED");
  }
  return Config(cmd.full(), merged);
}

struct RunOutcome {
  int code = 0;
  std::string message;
  std::string config_hash;
};

RunOutcome execute(const Command& cmd, const Config& cfg, const fs::path& out_dir, bool quiet) {
  RunOutcome r;
  json canonical = {{"command", cmd.full()}, {"config", cfg.values()}};
  r.config_hash = hex64(fnv1a(canonical.dump()));
  Outputs out(out_dir);
  try {
    r.code = cmd.run(cfg, out);
  } catch (const SchemaError& e) {
    r.code = 2;
    r.message = "config." + e.path + ": " + e.what();
    return r;
  } catch (const Error& e) {
    r.code = e.is_precondition() ? 2 : 1;
    r.message = e.what();
  }
  if (r.code == 2) return r;
  json prov = {{"tool", "plateau_cli"},
               {"versions", versions()},
               {"command", cmd.full()},
               {"config", cfg.values()},
               {"config_hash", r.config_hash},
               {"exit_code", r.code},
               {"status", r.code == 0 ? "pass" : "fail"},
               {"residuals", out.residuals},
               {"artifacts", out.artifacts()}};
  if (!r.message.empty()) prov["error"] = r.message;
  out.write_json("provenance.json", prov);
  if (!quiet && r.message.empty()) std::cout << out.result.dump(2) << "\n";
  return r;
}

// ---------------------------------------------------------------------------

struct Invocation {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out = ".";
  bool quiet = false;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
};

json collect_overrides(const Invocation& inv) {
  json o = json::object();
  for (const auto& s : inv.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw SchemaError("define", "expected key=value, got \"" + s + "\"");
    o[key_name(trim(s.substr(0, eq)))] = trim(s.substr(eq + 1));
  }
  for (const auto& [k, opt] : inv.options)
    if (opt->count() > 0) o[k] = inv.flags.at(k);
  return o;
}

int fail(int code, const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

int run_sweep(const std::vector<Command>& cs, const std::vector<std::string>& target,
              const std::vector<std::string>& grid_specs, const Invocation& inv, int jobs) {
  if (target.size() != 2) return fail(2, "config.command: sweep needs '<group> <command>'");
  const auto it = std::find_if(cs.begin(), cs.end(), [&](const Command& c) {
    return c.group == target[0] && c.name == target[1];
  });
  if (it == cs.end()) return fail(2, "config.command: unknown command '" + target[0] + " " + target[1] + "'");
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
  for (const auto& g : grid_specs) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) return fail(2, "config.grid: expected key=v1,v2,..., got \"" + g + "\"");
    std::vector<std::string> vals;
    std::stringstream ss(g.substr(eq + 1));
    std::string v;
    while (std::getline(ss, v, ',')) vals.push_back(trim(v));
    if (vals.empty()) return fail(2, "config.grid." + key_name(trim(g.substr(0, eq))) + ": no values");
    grid.emplace_back(key_name(trim(g.substr(0, eq))), vals);
  }
  std::vector<Config> configs;
  std::vector<json> points;
  try {
    const json file = inv.config_file.empty() ? json::object() : read_config_file(inv.config_file);
    const json base = collect_overrides(inv);
    std::size_t total = 1;
    for (const auto& g : grid) total *= g.second.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      json o = base, point = json::object();
      std::size_t rem = idx;
      for (auto g = grid.rbegin(); g != grid.rend(); ++g) {
        const auto& v = g->second[rem % g->second.size()];
        rem /= g->second.size();
        o[g->first] = v;
        point[g->first] = v;
      }
      configs.push_back(resolve(*it, file, o));
      points.push_back(point);
    }
  } catch (const SchemaError& e) {
    return fail(2, "config." + e.path + ": " + e.what());
  }
  auto dir_of = [&](std::size_t i) {
    std::ostringstream os;
    os << "run_" << std::setw(4) << std::setfill('0') << i;
    return fs::path(inv.out) / os.str();
  };
  std::vector<RunOutcome> outcomes(configs.size());
  // Configs are independent; each run is single-threaded and writes its own directory.
  for (std::size_t start = 0; start < configs.size(); start += std::size_t(jobs)) {
    std::vector<std::future<RunOutcome>> fut;
    for (std::size_t i = start; i < std::min(configs.size(), start + std::size_t(jobs)); ++i)
      fut.push_back(std::async(std::launch::async, [&, i] { return execute(*it, configs[i], dir_of(i), true); }));
    for (std::size_t k = 0; k < fut.size(); ++k) outcomes[start + k] = fut[k].get();
  }
  json runs = json::array();
  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    json r = {{"index", i},
              {"dir", dir_of(i).filename().string()},
              {"point", points[i]},
              {"exit_code", outcomes[i].code},
              {"config_hash", outcomes[i].config_hash}};
    if (!outcomes[i].message.empty()) r["error"] = outcomes[i].message;
    runs.push_back(r);
    worst = std::max(worst, outcomes[i].code);
  }
  json grid_json = json::array();
  for (const auto& [k, v] : grid) grid_json.push_back({{"field", k}, {"values", v}});
  const json summary = {{"command", it->full()}, {"grid", grid_json}, {"runs", runs}};
  fs::create_directories(inv.out);
  std::ofstream(fs::path(inv.out) / "sweep.json", std::ios::binary) << summary.dump(2) << "\n";
  if (!inv.quiet) std::cout << summary.dump(2) << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  const auto cs = commands();
  CLI::App app{"Euler-Plateau boundary solvers, critical-surface constructors and identity audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::vector<Invocation> invs(cs.size());
  std::map<std::string, CLI::App*> groups;
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    if (!groups.count(c.group)) {
      groups[c.group] = app.add_subcommand(c.group, c.group + " commands");
      groups[c.group]->require_subcommand(1);
    }
    auto* sub = groups[c.group]->add_subcommand(c.name, c.help);
    auto& inv = invs[i];
    sub->add_option("--config", inv.config_file, "key=value or JSON config file");
    sub->add_option("-D,--define", inv.sets, "override a field: key=value (repeatable)");
    sub->add_option("--out", inv.out, "output directory")->capture_default_str();
    sub->add_flag("--quiet", inv.quiet, "do not print the result");
    for (const auto& f : c.fields) {
      std::string help = f.help;
      if (!f.def.is_null()) help += " [" + (f.def.is_string() ? f.def.get<std::string>() : f.def.dump()) + "]";
      inv.options[f.name] = sub->add_option(flag_name(f.name), inv.flags[f.name], help);
    }
    subs.push_back(sub);
  }

  Invocation sweep_inv;
  std::vector<std::string> sweep_target, grid_specs;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a command over a parameter grid");
  sweep->add_option("target", sweep_target, "<group> <command>")->expected(2)->required();
  sweep->add_option("--grid", grid_specs, "field=v1,v2,... (repeatable; Cartesian product)");
  sweep->add_option("-D,--define", sweep_inv.sets, "fixed override key=value (repeatable)");
  sweep->add_option("--config", sweep_inv.config_file, "base config file");
  sweep->add_option("--out", sweep_inv.out, "output directory")->capture_default_str();
  sweep->add_option("--jobs", jobs, "configs run concurrently")->check(CLI::Range(1, 64));
  sweep->add_flag("--quiet", sweep_inv.quiet, "do not print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sweep->parsed()) return run_sweep(cs, sweep_target, grid_specs, sweep_inv, jobs);

  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const json file = invs[i].config_file.empty() ? json::object() : read_config_file(invs[i].config_file);
      const Config cfg = resolve(cs[i], file, collect_overrides(invs[i]));
      const auto r = execute(cs[i], cfg, invs[i].out, invs[i].quiet);
      if (!r.message.empty()) std::cerr << "error: " << r.message << "\n";
      return r.code;
    } catch (const SchemaError& e) {
      return fail(2, "config." + e.path + ": " + e.what());
    } catch (const std::exception& e) {
      return fail(1, e.what());
    }
  }
  return 2;
}
