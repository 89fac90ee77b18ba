#include "vfrac/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vfrac/error.hpp"

namespace vfrac {

using nlohmann::json;

// ---------------------------------------------------------------------------
// TimeProfile / LoadProgram

double TimeProfile::value(double t) const noexcept {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return scale;
    case Kind::linear: return scale * t;
    case Kind::ramp_hold:
      if (t <= 0.0) return 0.0;
      return t >= t_ramp ? scale : scale * t / t_ramp;
  }
  return 0.0;
}

double TimeProfile::rate(double t) const noexcept {
  switch (kind) {
    case Kind::zero:
    case Kind::constant: return 0.0;
    case Kind::linear: return scale;
    case Kind::ramp_hold: return (t > 0.0 && t <= t_ramp) ? scale / t_ramp : 0.0;
  }
  return 0.0;
}

std::vector<double> TimeProfile::kinks() const {
  if (kind == Kind::ramp_hold) return {0.0, t_ramp};
  return {};
}

void LoadProgram::verify_rates(double t0, double t1, double tol) const {
  const TimeProfile* profiles[] = {&dirichlet_profile, &body_force_profile, &traction_profile};
  const char* names[] = {"dirichlet", "body_force", "traction"};
  const double span = t1 - t0;
  const double delta = 1e-6 * std::max(1.0, std::abs(span));
  constexpr int samples = 37;
  for (int p = 0; p < 3; ++p) {
    const auto& prof = *profiles[p];
    const auto kinks = prof.kinks();
    for (int k = 0; k <= samples; ++k) {
      const double t = t0 + span * k / samples;
      bool near_kink = false;
      for (double tk : kinks) near_kink = near_kink || std::abs(t - tk) <= 2.0 * delta;
      if (near_kink) continue;
      const double fd = (prof.value(t + delta) - prof.value(t - delta)) / (2.0 * delta);
      const double an = prof.rate(t);
      if (std::abs(fd - an) > tol * std::max(1.0, std::abs(an))) {
        throw ConfigError(std::string("loads: ") + names[p] +
                          " rate inconsistent with its value descriptor at t = " + std::to_string(t));
      }
    }
  }
}

LoadProgram LoadProgram::strip_shear(double amplitude, double half_height, double t_ramp) {
  LoadProgram lp;
  lp.dirichlet_profile = t_ramp > 0.0 ? TimeProfile::ramp_hold(1.0, t_ramp) : TimeProfile::constant(1.0);
  lp.dirichlet_gradient = {0.0, 0.0, 0.0, amplitude / half_height};
  return lp;
}

std::size_t TimeGrid::steps() const {
  return static_cast<std::size_t>(std::llround((t1 - t0) / dt));
}

std::string_view to_string(TimeScheme s) noexcept {
  return s == TimeScheme::trapezoidal ? "trapezoidal" : "semi_implicit";
}

void ScenarioConfig::validate() const {
  material.validate();
  if (!(time.dt > 0.0)) throw ConfigError("time: dt must be > 0");
  if (!(time.t1 > time.t0)) throw ConfigError("time: t1 must exceed t0");
  if (initial_damage.kind == InitialDamage::Kind::constant &&
      !(initial_damage.value >= 0.0 && initial_damage.value <= 1.0)) {
    throw ConfigError("initial_damage: value must lie in [0, 1]");
  }
  if (!(mesh.width > 0.0 && mesh.height > 0.0 && mesh.h > 0.0)) {
    throw ConfigError("mesh: width, height and h must be > 0");
  }
  if (loads.dirichlet_profile.kind == TimeProfile::Kind::ramp_hold && !(loads.dirichlet_profile.t_ramp > 0.0)) {
    throw ConfigError("loads: ramp_hold requires t_ramp > 0");
  }
  if (!(output.tip_threshold > 0.0 && output.tip_threshold < 1.0)) {
    throw ConfigError("output: tip_threshold must lie in (0, 1)");
  }
  if (!(output.steady_tolerance > 0.0)) throw ConfigError("output: steady_tolerance must be > 0");
  if (!std::isnan(output.beta_window) && !(output.beta_window > 0.0)) {
    throw ConfigError("output: beta_window must be > 0");
  }
  if (!(solver.residual_tolerance > 0.0)) throw ConfigError("solver: residual_tolerance must be > 0");
  if (solver.corrector_passes < 1) throw ConfigError("solver: corrector_passes must be >= 1");
  if (!(solver.corrector_tolerance > 0.0)) throw ConfigError("solver: corrector_tolerance must be > 0");
  if (solver.time_scheme == TimeScheme::trapezoidal && material.friction_alpha_u > 0.0) {
    throw ConfigError("solver: the trapezoidal scheme needs quasi-static displacements (friction_alpha_u = 0)");
  }
  loads.verify_rates(time.t0, time.t1);
}

// ---------------------------------------------------------------------------
// Strict JSON reading

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return required<T>(key);
  }

  template <class T>
  T required(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing key '" + key + "'");
    used_.insert(key);
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!j_.at(key).is_number_integer()) throw ConfigError(path_ + "." + key + ": expected an integer");
    }
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  Reader child(const std::string& key) {
    used_.insert(key);
    return Reader(j_.at(key), path_ + "." + key);
  }

  std::string path() const { return path_; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Point read_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(const Point& p) { return json::array({p.x, p.y}); }

TimeProfile read_profile(Reader r) {
  TimeProfile p;
  const auto kind = r.required<std::string>("kind");
  if (kind == "zero") {
    p = TimeProfile::zero();
  } else if (kind == "constant") {
    p = TimeProfile::constant(r.get<double>("scale", 1.0));
  } else if (kind == "linear") {
    p = TimeProfile::linear(r.get<double>("scale", 1.0));
  } else if (kind == "ramp_hold") {
    p = TimeProfile::ramp_hold(r.get<double>("scale", 1.0), r.required<double>("t_ramp"));
  } else {
    throw ConfigError(r.path() + ": unknown profile kind '" + kind + "'");
  }
  r.finish();
  return p;
}

json write_profile(const TimeProfile& p) {
  switch (p.kind) {
    case TimeProfile::Kind::zero: return {{"kind", "zero"}};
    case TimeProfile::Kind::constant: return {{"kind", "constant"}, {"scale", p.scale}};
    case TimeProfile::Kind::linear: return {{"kind", "linear"}, {"scale", p.scale}};
    case TimeProfile::Kind::ramp_hold:
      return {{"kind", "ramp_hold"}, {"scale", p.scale}, {"t_ramp", p.t_ramp}};
  }
  return {};
}

RateLaw read_rate_law(Reader r) {
  const auto kind = r.required<std::string>("kind");
  RateLaw law = RateLaw::linear(1.0);
  if (kind == "linear") {
    law = RateLaw::linear(r.required<double>("alpha"));
  } else if (kind == "power") {
    law = RateLaw::power(r.required<double>("k"), r.required<double>("p"));
  } else if (kind == "tabulated") {
    const json& s = r.raw("samples");
    if (!s.is_array()) throw ConfigError(r.path() + ".samples: expected an array");
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : s) {
      Point p = read_point(row, r.path() + ".samples");
      samples.emplace_back(p.x, p.y);
    }
    law = RateLaw::tabulated(std::move(samples));
  } else {
    throw ConfigError(r.path() + ": unknown rate law kind '" + kind + "'");
  }
  r.finish();
  return law;
}

json write_rate_law(const RateLaw& law) {
  if (const auto* l = std::get_if<LinearRate>(&law.kind())) return {{"kind", "linear"}, {"alpha", l->alpha}};
  if (const auto* p = std::get_if<PowerRate>(&law.kind())) return {{"kind", "power"}, {"k", p->k}, {"p", p->p}};
  const auto& t = std::get<TabulatedRate>(law.kind());
  json samples = json::array();
  for (const auto& [v, a] : t.samples) samples.push_back({v, a});
  return {{"kind", "tabulated"}, {"samples", samples}};
}

MaterialParams read_material(Reader r, const char* default_mode = "plane_strain") {
  MaterialParams m;
  const bool lame = r.has("lame_lambda") || r.has("lame_mu");
  const bool engineering = r.has("young") || r.has("poisson");
  if (lame && engineering) throw ConfigError(r.path() + ": give either Lame constants or young/poisson");
  m.plane_mode = plane_mode_from_string(r.get<std::string>("plane_mode", default_mode));
  if (engineering) {
    const auto mode = m.plane_mode;
    m = MaterialParams::from_young_poisson(r.required<double>("young"), r.required<double>("poisson"), mode);
  } else {
    m.lame_lambda = r.required<double>("lame_lambda");
    m.lame_mu = r.required<double>("lame_mu");
  }
  m.g_c = r.required<double>("g_c");
  m.epsilon = r.required<double>("epsilon");
  if (r.has("rate_law")) m.rate_law = read_rate_law(r.child("rate_law"));
  m.friction_alpha_u = r.get<double>("friction_alpha_u", 0.0);
  m.residual_stiffness = r.get<double>("residual_stiffness", 1e-6);
  r.finish();
  return m;
}

TagRule read_tags(Reader r) {
  TagRule t;
  t.bottom = boundary_tag_from_string(r.get<std::string>("bottom", "neumann_free"));
  t.right = boundary_tag_from_string(r.get<std::string>("right", "neumann_free"));
  t.top = boundary_tag_from_string(r.get<std::string>("top", "neumann_free"));
  t.left = boundary_tag_from_string(r.get<std::string>("left", "neumann_free"));
  r.finish();
  return t;
}

LoadProgram read_loads(Reader r) {
  LoadProgram lp;
  if (r.has("dirichlet")) {
    Reader d = r.child("dirichlet");
    lp.dirichlet_profile = read_profile(d.child("profile"));
    if (d.has("gradient")) {
      const json& g = d.raw("gradient");
      if (!g.is_array() || g.size() != 2) throw ConfigError(d.path() + ".gradient: expected [[a,b],[c,d]]");
      const Point r0 = read_point(g[0], d.path() + ".gradient");
      const Point r1 = read_point(g[1], d.path() + ".gradient");
      lp.dirichlet_gradient = {r0.x, r0.y, r1.x, r1.y};
    }
    if (d.has("offset")) lp.dirichlet_offset = read_point(d.raw("offset"), d.path() + ".offset");
    d.finish();
  }
  if (r.has("body_force")) {
    Reader b = r.child("body_force");
    lp.body_force_profile = read_profile(b.child("profile"));
    lp.body_force = read_point(b.raw("value"), b.path() + ".value");
    b.finish();
  }
  if (r.has("traction")) {
    Reader q = r.child("traction");
    lp.traction_profile = read_profile(q.child("profile"));
    lp.traction = read_point(q.raw("value"), q.path() + ".value");
    q.finish();
  }
  r.finish();
  return lp;
}

InitialDamage read_initial_damage(Reader r) {
  InitialDamage d;
  const auto kind = r.required<std::string>("kind");
  if (kind == "zero") {
    d.kind = InitialDamage::Kind::zero;
  } else if (kind == "constant") {
    d.kind = InitialDamage::Kind::constant;
    d.value = r.required<double>("value");
  } else if (kind == "seed_crack") {
    d.kind = InitialDamage::Kind::seed_crack;
    d.from = read_point(r.raw("from"), r.path() + ".from");
    d.to = read_point(r.raw("to"), r.path() + ".to");
  } else {
    throw ConfigError(r.path() + ": unknown initial damage kind '" + kind + "'");
  }
  r.finish();
  return d;
}

double nan_or(Reader& r, const std::string& key) {
  return r.get<double>(key, std::numeric_limits<double>::quiet_NaN());
}

json nan_to_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

OutputControls read_output(Reader o) {
  OutputControls out;
  out.vtk_every = o.get<int>("vtk_every", 0);
  out.strip_diagnostics = o.get<bool>("strip_diagnostics", false);
  if (o.has("crack_line_y") && !o.raw("crack_line_y").is_null()) out.crack_line_y = o.required<double>("crack_line_y");
  out.tip_threshold = o.get<double>("tip_threshold", 0.5);
  if (o.has("end_margin") && !o.raw("end_margin").is_null()) out.end_margin = o.required<double>("end_margin");
  out.steady_tolerance = o.get<double>("steady_tolerance", 0.05);
  out.dissipation_tolerance = o.get<double>("dissipation_tolerance", 0.05);
  if (o.has("beta_window") && !o.raw("beta_window").is_null()) out.beta_window = o.required<double>("beta_window");
  o.finish();
  return out;
}

SolverControls read_solver(Reader s) {
  SolverControls out;
  out.residual_tolerance = s.get<double>("residual_tolerance", 1e-10);
  if (s.has("stop_tip_x") && !s.raw("stop_tip_x").is_null()) out.stop_tip_x = nan_or(s, "stop_tip_x");
  out.stability_warnings = s.get<bool>("stability_warnings", true);
  if (s.has("time_scheme")) {
    const auto name = s.get<std::string>("time_scheme", "semi_implicit");
    if (name == "semi_implicit") out.time_scheme = TimeScheme::semi_implicit;
    else if (name == "trapezoidal") out.time_scheme = TimeScheme::trapezoidal;
    else throw ConfigError("solver: unknown time_scheme '" + name + "'");
  }
  out.corrector_passes = s.get<int>("corrector_passes", 20);
  out.corrector_tolerance = s.get<double>("corrector_tolerance", 1e-5);
  s.finish();
  return out;
}

json write_output(const OutputControls& o) {
  return {{"vtk_every", o.vtk_every},
          {"strip_diagnostics", o.strip_diagnostics},
          {"crack_line_y", nan_to_null(o.crack_line_y)},
          {"tip_threshold", o.tip_threshold},
          {"end_margin", nan_to_null(o.end_margin)},
          {"steady_tolerance", o.steady_tolerance},
          {"dissipation_tolerance", o.dissipation_tolerance},
          {"beta_window", nan_to_null(o.beta_window)}};
}

json write_solver(const SolverControls& s) {
  return {{"residual_tolerance", s.residual_tolerance},
          {"stop_tip_x", nan_to_null(s.stop_tip_x)},
          {"stability_warnings", s.stability_warnings},
          {"time_scheme", std::string(to_string(s.time_scheme))},
          {"corrector_passes", s.corrector_passes},
          {"corrector_tolerance", s.corrector_tolerance}};
}

json write_material(const MaterialParams& m) {
  return {{"lame_lambda", m.lame_lambda},
          {"lame_mu", m.lame_mu},
          {"plane_mode", std::string(to_string(m.plane_mode))},
          {"g_c", m.g_c},
          {"epsilon", m.epsilon},
          {"rate_law", write_rate_law(m.rate_law)},
          {"friction_alpha_u", m.friction_alpha_u},
          {"residual_stiffness", m.residual_stiffness}};
}

json parse_root(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> read_number_list(Reader& r, const std::string& key) {
  const json& a = r.raw(key);
  if (!a.is_array()) throw ConfigError(r.path() + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(r.path() + "." + key + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  Reader r(root, "config");
  ScenarioConfig cfg;
  cfg.name = r.get<std::string>("name", "scenario");

  {
    Reader m = r.child("mesh");
    cfg.mesh.width = m.required<double>("width");
    cfg.mesh.height = m.required<double>("height");
    cfg.mesh.h = m.required<double>("h");
    if (m.has("origin")) cfg.mesh.origin = read_point(m.raw("origin"), m.path() + ".origin");
    if (m.has("tags")) cfg.mesh.tags = read_tags(m.child("tags"));
    m.finish();
  }
  cfg.material = read_material(r.child("material"));
  if (r.has("loads")) cfg.loads = read_loads(r.child("loads"));
  {
    Reader t = r.child("time");
    cfg.time.t0 = t.get<double>("t0", 0.0);
    cfg.time.t1 = t.required<double>("t1");
    cfg.time.dt = t.required<double>("dt");
    t.finish();
  }
  if (r.has("initial_damage")) cfg.initial_damage = read_initial_damage(r.child("initial_damage"));
  if (r.has("output")) cfg.output = read_output(r.child("output"));
  if (r.has("solver")) cfg.solver = read_solver(r.child("solver"));
  r.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) { return parse_scenario_config(read_file(path)); }

std::string to_json(const ScenarioConfig& cfg, int indent) {
  json j;
  j["name"] = cfg.name;
  j["mesh"] = {{"width", cfg.mesh.width},
               {"height", cfg.mesh.height},
               {"h", cfg.mesh.h},
               {"origin", write_point(cfg.mesh.origin)},
               {"tags",
                {{"bottom", std::string(to_string(cfg.mesh.tags.bottom))},
                 {"right", std::string(to_string(cfg.mesh.tags.right))},
                 {"top", std::string(to_string(cfg.mesh.tags.top))},
                 {"left", std::string(to_string(cfg.mesh.tags.left))}}}};
  j["material"] = write_material(cfg.material);
  const auto& l = cfg.loads;
  const auto& g = l.dirichlet_gradient;
  j["loads"] = {{"dirichlet",
                 {{"profile", write_profile(l.dirichlet_profile)},
                  {"gradient", json::array({json::array({g[0], g[1]}), json::array({g[2], g[3]})})},
                  {"offset", write_point(l.dirichlet_offset)}}},
                {"body_force", {{"profile", write_profile(l.body_force_profile)}, {"value", write_point(l.body_force)}}},
                {"traction", {{"profile", write_profile(l.traction_profile)}, {"value", write_point(l.traction)}}}};
  j["time"] = {{"t0", cfg.time.t0}, {"t1", cfg.time.t1}, {"dt", cfg.time.dt}};
  const auto& d = cfg.initial_damage;
  switch (d.kind) {
    case InitialDamage::Kind::zero: j["initial_damage"] = {{"kind", "zero"}}; break;
    case InitialDamage::Kind::constant: j["initial_damage"] = {{"kind", "constant"}, {"value", d.value}}; break;
    case InitialDamage::Kind::seed_crack:
      j["initial_damage"] = {{"kind", "seed_crack"}, {"from", write_point(d.from)}, {"to", write_point(d.to)}};
      break;
  }
  j["output"] = write_output(cfg.output);
  j["solver"] = write_solver(cfg.solver);
  return j.dump(indent);
}

RateLaw parse_rate_law(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("rate_law: invalid JSON: ") + e.what());
  }
  return read_rate_law(Reader(j, "rate_law"));
}

std::string to_json(const RateLaw& law) { return write_rate_law(law).dump(); }

// ---------------------------------------------------------------------------
// Figure-3 and traveling-wave configs

void Figure3Config::validate() const {
  if (alphas.empty()) throw ConfigError("figure3: alphas must not be empty");
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError("figure3: every alpha must be > 0");
  }
  if (!(dt > 0.0)) throw ConfigError("figure3: dt must be > 0");
  if (!(t1 > t0)) throw ConfigError("figure3: t1 must exceed t0");
  if (!(g_c > 0.0)) throw ConfigError("figure3: g_c must be > 0");
  if (!(l0 >= 0.0 && l0 <= 4.0)) throw ConfigError("figure3: l0 must lie in [0, 4]");
}

Figure3Config parse_figure3_config(const std::string& json_text) {
  const json root = parse_root(json_text, "figure3");
  Reader r(root, "figure3");
  Figure3Config c;
  if (r.has("alphas")) c.alphas = read_number_list(r, "alphas");
  c.dt = r.get<double>("dt", c.dt);
  c.l0 = r.get<double>("l0", c.l0);
  c.t0 = r.get<double>("t0", c.t0);
  c.t1 = r.get<double>("t1", c.t1);
  c.g_c = r.get<double>("g_c", c.g_c);
  r.finish();
  c.validate();
  return c;
}

Figure3Config load_figure3_config(const std::string& path) { return parse_figure3_config(read_file(path)); }

std::string to_json(const Figure3Config& c, int indent) {
  json j = {{"alphas", c.alphas}, {"dt", c.dt}, {"l0", c.l0}, {"t0", c.t0}, {"t1", c.t1}, {"g_c", c.g_c}};
  return j.dump(indent);
}

void TravelWaveConfig::validate() const {
  const auto& s = strip;
  if (!(s.half_height > 0.0 && s.width > 0.0 && s.h > 0.0)) throw ConfigError("travelwave: strip sizes must be > 0");
  if (!(s.seed_length > 0.0 && s.seed_length < s.width)) throw ConfigError("travelwave: seed_length must lie in (0, width)");
  if (amplitudes.empty() || alphas.empty()) throw ConfigError("travelwave: amplitudes and alphas must not be empty");
  for (double a : amplitudes) {
    if (!(a > 0.0)) throw ConfigError("travelwave: amplitudes must be > 0");
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError("travelwave: alphas must be > 0");
  }
  if (!(t_ramp >= 0.0)) throw ConfigError("travelwave: t_ramp must be >= 0");
  if (!(time.dt > 0.0) || !(time.t1 > time.t0)) throw ConfigError("travelwave: invalid time grid");
  if (workers < 0) throw ConfigError("travelwave: workers must be >= 0");
  material.validate();
}

TravelWaveConfig parse_travelwave_config(const std::string& json_text) {
  const json root = parse_root(json_text, "travelwave");
  Reader r(root, "travelwave");
  TravelWaveConfig c;
  c.name = r.get<std::string>("name", c.name);
  {
    Reader s = r.child("strip");
    c.strip.half_height = s.required<double>("half_height");
    c.strip.width = s.get<double>("width", 10.0 * c.strip.half_height);
    c.strip.h = s.required<double>("h");
    c.strip.seed_length = s.get<double>("seed_length", c.strip.half_height);
    s.finish();
  }
  c.material = read_material(r.child("material"), "plane_stress");
  c.amplitudes = read_number_list(r, "amplitudes");
  c.alphas = read_number_list(r, "alphas");
  c.t_ramp = r.get<double>("t_ramp", c.t_ramp);
  {
    Reader t = r.child("time");
    c.time.t0 = t.get<double>("t0", 0.0);
    c.time.t1 = t.required<double>("t1");
    c.time.dt = t.required<double>("dt");
    t.finish();
  }
  if (r.has("output")) c.output = read_output(r.child("output"));
  if (r.has("solver")) c.solver = read_solver(r.child("solver"));
  c.workers = r.get<int>("workers", 0);
  r.finish();
  c.validate();
  return c;
}

TravelWaveConfig load_travelwave_config(const std::string& path) { return parse_travelwave_config(read_file(path)); }

std::string to_json(const TravelWaveConfig& c, int indent) {
  json j;
  j["name"] = c.name;
  j["strip"] = {{"half_height", c.strip.half_height},
                {"width", c.strip.width},
                {"h", c.strip.h},
                {"seed_length", c.strip.seed_length}};
  j["material"] = write_material(c.material);
  j["amplitudes"] = c.amplitudes;
  j["alphas"] = c.alphas;
  j["t_ramp"] = c.t_ramp;
  j["time"] = {{"t0", c.time.t0}, {"t1", c.time.t1}, {"dt", c.time.dt}};
  j["output"] = write_output(c.output);
  j["solver"] = write_solver(c.solver);
  j["workers"] = c.workers;
  return j.dump(indent);
}

}  // namespace vfrac
