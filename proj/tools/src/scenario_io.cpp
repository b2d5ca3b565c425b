#include "mrac_app/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mrac/errors.hpp"

namespace mrac::app {

namespace {

std::string format_location(const std::string& source, int line, int column) {
  std::ostringstream os;
  os << source;
  if (line > 0) {
    os << ':' << line;
    if (column > 0) {
      os << ':' << column;
    }
  }
  return os.str();
}

// Wraps the document so every error carries the source and the node's line.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    if (!at.IsDefined()) {
      throw ConfigError(source_, 0, 0, what);
    }
    const YAML::Mark mk = at.Mark();
    const bool known = mk.line >= 0;
    throw ConfigError(source_, known ? mk.line + 1 : 0, known ? mk.column + 1 : 0, what);
  }

  void require_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) {
      fail(n, what + " must be a mapping");
    }
  }

  // Rejects keys outside `allowed` so typos do not silently become defaults.
  void check_keys(const YAML::Node& n, const std::string& section,
                  std::initializer_list<const char*> allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
      const std::string key = kv.first.as<std::string>();
      if (!ok.count(key)) {
        std::string list;
        for (const char* a : allowed) {
          list += list.empty() ? a : std::string(", ") + a;
        }
        fail(kv.first, "unknown key '" + key + "' in " + section + " (expected one of: " + list +
                           ")");
      }
    }
  }

  double number(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) {
      fail(n, what + " must be a number");
    }
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, what + " must be a number, got '" + n.Scalar() + "'");
    }
  }

  long integer(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) {
      fail(n, what + " must be an integer");
    }
    try {
      return n.as<long>();
    } catch (const YAML::Exception&) {
      fail(n, what + " must be an integer, got '" + n.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, what + " must be true or false");
    }
  }

  std::string text(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) {
      fail(n, what + " must be a string");
    }
    return n.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) {
      fail(n, what + " must be a list of numbers");
    }
    std::vector<double> out;
    for (const auto& item : n) {
      out.push_back(number(item, what + " entry"));
    }
    return out;
  }

  Polynomial polynomial(const YAML::Node& n, const std::string& what) const {
    const std::vector<double> d = numbers(n, what);
    if (d.empty()) {
      fail(n, what + " must list at least one coefficient");
    }
    return Polynomial::from_descending(d);
  }

  // Runs a check and re-anchors InvalidArgument at `at`.
  template <class F>
  void anchored(const YAML::Node& at, F&& check) const {
    try {
      check();
    } catch (const InvalidArgument& ex) {
      fail(at, ex.what());
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

void require_design_poly(const Reader& rd, const YAML::Node& at, const Polynomial& p,
                         int degree, const std::string& name) {
  if (p.degree() != degree) {
    rd.fail(at, name + " must have degree " + std::to_string(degree) + ", got " +
                    std::to_string(p.degree()) + " (" + p.to_string() + ")");
  }
  if (!p.is_monic(1e-12)) {
    rd.fail(at, name + " must be monic (leading coefficient 1): " + p.to_string());
  }
  if (degree > 0 && !is_hurwitz(p)) {
    rd.fail(at, name + " is not Hurwitz: " + p.to_string());
  }
}

void parse_plant(const Reader& rd, const YAML::Node& n, PlantModel& plant) {
  rd.require_map(n, "plant");
  rd.check_keys(n, "plant", {"P", "Z", "kp"});
  if (!n["P"]) rd.fail(n, "plant.P is required");
  if (!n["kp"]) rd.fail(n, "plant.kp is required");
  plant.p = rd.polynomial(n["P"], "plant.P");
  plant.z = n["Z"] ? rd.polynomial(n["Z"], "plant.Z") : Polynomial{1.0};
  plant.kp = rd.number(n["kp"], "plant.kp");
}

void check_plant(const Reader& rd, const YAML::Node& n, const PlantModel& plant) {
  const YAML::Node z = n["Z"] ? n["Z"] : n;
  if (plant.p.degree() < 1 || !plant.p.is_monic(1e-12)) {
    rd.fail(n["P"], "plant.P must be monic with degree >= 1: " + plant.p.to_string());
  }
  if (!plant.z.is_monic(1e-12)) {
    rd.fail(z, "plant.Z must be monic: " + plant.z.to_string());
  }
  if (plant.m() >= plant.n()) {
    rd.fail(z, "plant.Z must have lower degree than plant.P");
  }
  rd.anchored(n["kp"], [&] {
    if (plant.kp == 0.0) throw InvalidArgument("high-frequency gain must be nonzero");
  });
  if (plant.m() > 0 && !is_hurwitz(plant.z)) {
    rd.fail(z, "plant.Z is not Hurwitz (plant must be minimum phase): " + plant.z.to_string());
  }
}

void parse_reference(const Reader& rd, const YAML::Node& n, ReferenceModel& ref, int n_star,
                     bool require_terms) {
  rd.require_map(n, "reference");
  rd.check_keys(n, "reference", {"Rm", "offset", "terms"});
  if (!n["Rm"]) rd.fail(n, "reference.Rm is required");
  ref.rm = rd.polynomial(n["Rm"], "reference.Rm");
  require_design_poly(rd, n["Rm"], ref.rm, n_star, "reference.Rm");
  ref.offset = n["offset"] ? rd.number(n["offset"], "reference.offset") : 0.0;
  ref.terms.clear();
  if (n["terms"]) {
    const YAML::Node t = n["terms"];
    if (!t.IsSequence()) rd.fail(t, "reference.terms must be a list");
    for (const auto& item : t) {
      rd.require_map(item, "reference.terms entry");
      rd.check_keys(item, "reference.terms entry", {"amplitude", "frequency", "phase"});
      Sinusoid s;
      s.amplitude = item["amplitude"] ? rd.number(item["amplitude"], "amplitude") : 0.0;
      s.frequency = item["frequency"] ? rd.number(item["frequency"], "frequency") : 0.0;
      s.phase = item["phase"] ? rd.number(item["phase"], "phase") : 0.0;
      ref.terms.push_back(s);
    }
  } else if (require_terms && ref.offset == 0.0) {
    rd.fail(n, "reference needs terms or a nonzero offset");
  }
}

Theta0Mode parse_mode(const Reader& rd, const YAML::Node& n) {
  const std::string m = rd.text(n, "theta0.mode");
  if (m == "multipliers") return Theta0Mode::multipliers;
  if (m == "explicit") return Theta0Mode::explicit_values;
  rd.fail(n, "theta0.mode must be 'multipliers' or 'explicit', got '" + m + "'");
}

void parse_adaptation(const Reader& rd, const YAML::Node& n, AdaptationSpec& a, int plant_n) {
  rd.require_map(n, "adaptation");
  rd.check_keys(n, "adaptation", {"beta1", "beta2", "upsilon0_scale", "sigma_magnitude", "theta0"});
  auto positive = [&](const char* key, double& dst) {
    if (!n[key]) return;
    dst = rd.number(n[key], std::string("adaptation.") + key);
    if (!(dst > 0.0)) rd.fail(n[key], std::string("adaptation.") + key + " must be positive");
  };
  positive("beta1", a.beta1);
  positive("beta2", a.beta2);
  positive("upsilon0_scale", a.upsilon0_scale);
  positive("sigma_magnitude", a.sigma_magnitude);
  if (!n["theta0"]) return;
  const YAML::Node t = n["theta0"];
  rd.require_map(t, "adaptation.theta0");
  rd.check_keys(t, "adaptation.theta0", {"mode", "multipliers", "values"});
  if (t["mode"]) a.theta0_mode = parse_mode(rd, t["mode"]);
  if (t["multipliers"]) {
    const YAML::Node m = t["multipliers"];
    rd.require_map(m, "adaptation.theta0.multipliers");
    rd.check_keys(m, "adaptation.theta0.multipliers",
                  {"theta1", "theta2", "theta3", "theta4", "theta_p", "rho", "lambda"});
    ProposedMultipliers& k = a.multipliers;
    auto get = [&](const char* key, double& dst) {
      if (m[key]) dst = rd.number(m[key], key);
    };
    get("theta1", k.theta1);
    get("theta2", k.theta2);
    get("theta3", k.theta3);
    get("theta4", k.theta4);
    get("theta_p", k.theta_p);
    get("rho", k.rho);
    get("lambda", k.lambda);
  }
  if (t["values"]) a.theta0_values = rd.numbers(t["values"], "adaptation.theta0.values");
  if (a.theta0_mode == Theta0Mode::explicit_values &&
      static_cast<int>(a.theta0_values.size()) != 4 * plant_n + 2) {
    rd.fail(t["values"] ? t["values"] : t, "adaptation.theta0.values must list 4n+2 = " +
                                               std::to_string(4 * plant_n + 2) + " numbers");
  }
}

void parse_baseline(const Reader& rd, const YAML::Node& n, BaselineSpec& b, int plant_n) {
  rd.require_map(n, "baseline");
  rd.check_keys(n, "baseline", {"gamma_scale", "gamma", "sign_kp", "normalized", "frozen",
                                "theta0"});
  if (n["gamma_scale"]) {
    b.gamma_scale = rd.number(n["gamma_scale"], "baseline.gamma_scale");
    if (!(b.gamma_scale > 0.0)) rd.fail(n["gamma_scale"], "baseline.gamma_scale must be positive");
  }
  if (n["gamma"]) {
    b.gamma = rd.number(n["gamma"], "baseline.gamma");
    if (!(b.gamma > 0.0)) rd.fail(n["gamma"], "baseline.gamma must be positive");
  }
  if (n["sign_kp"]) {
    const long s = rd.integer(n["sign_kp"], "baseline.sign_kp");
    if (s != 1 && s != -1) rd.fail(n["sign_kp"], "baseline.sign_kp must be 1 or -1");
    b.sign_kp = static_cast<int>(s);
  }
  if (n["normalized"]) b.normalized = rd.boolean(n["normalized"], "baseline.normalized");
  if (n["frozen"]) b.frozen = rd.boolean(n["frozen"], "baseline.frozen");
  if (!n["theta0"]) return;
  const YAML::Node t = n["theta0"];
  rd.require_map(t, "baseline.theta0");
  rd.check_keys(t, "baseline.theta0",
                {"mode", "theta_multiplier", "chi_multiplier", "values", "chi0"});
  if (t["mode"]) b.theta0_mode = parse_mode(rd, t["mode"]);
  if (t["theta_multiplier"]) b.theta_multiplier = rd.number(t["theta_multiplier"], "theta_multiplier");
  if (t["chi_multiplier"]) b.chi_multiplier = rd.number(t["chi_multiplier"], "chi_multiplier");
  if (t["values"]) b.theta0_values = rd.numbers(t["values"], "baseline.theta0.values");
  if (t["chi0"]) b.chi0 = rd.number(t["chi0"], "baseline.theta0.chi0");
  if (b.theta0_mode == Theta0Mode::explicit_values &&
      static_cast<int>(b.theta0_values.size()) != 2 * plant_n) {
    rd.fail(t["values"] ? t["values"] : t,
            "baseline.theta0.values must list 2n = " + std::to_string(2 * plant_n) + " numbers");
  }
}

void parse_sim(const Reader& rd, const YAML::Node& n, SimSpec& s) {
  rd.require_map(n, "sim");
  rd.check_keys(n, "sim", {"dt", "t_final", "record_stride"});
  if (n["dt"]) {
    s.dt = rd.number(n["dt"], "sim.dt");
    if (!(s.dt > 0.0)) rd.fail(n["dt"], "sim.dt must be positive");
  }
  if (n["t_final"]) {
    s.t_final = rd.number(n["t_final"], "sim.t_final");
    if (!(s.t_final > s.dt)) rd.fail(n["t_final"], "sim.t_final must exceed sim.dt");
  }
  if (n["record_stride"]) {
    const long k = rd.integer(n["record_stride"], "sim.record_stride");
    if (k < 1) rd.fail(n["record_stride"], "sim.record_stride must be >= 1");
    s.record_stride = static_cast<int>(k);
  }
}

YAML::Node load_root(const std::string& text, const std::string& source) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) {
      throw ConfigError(source, 1, 1, "top level must be a mapping");
    }
    return root;
  } catch (const YAML::ParserException& ex) {
    throw ConfigError(source, ex.mark.line + 1, ex.mark.column + 1, ex.msg);
  }
}

std::string normalize_name(std::string s) {
  std::replace(s.begin(), s.end(), '_', '-');
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& what)
    : std::runtime_error(format_location(source, line, column) + ": " + what),
      line_(line),
      column_(column) {}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name) {
  const std::string n = normalize_name(name);
  if (n == "boeing-case-i") return boeing_scenario(BoeingCase::i);
  if (n == "boeing-case-ii") return boeing_scenario(BoeingCase::ii);
  if (n == "boeing-baseline") return boeing_baseline_scenario();
  return std::nullopt;
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  const Reader rd(source);
  const YAML::Node root = load_root(text, source);
  rd.check_keys(root, "scenario", {"name", "plant", "reference", "controller", "structure",
                                   "adaptation", "baseline", "sim", "diagnostics"});
  ScenarioConfig cfg;
  if (root["name"]) cfg.name = rd.text(root["name"], "name");
  if (!root["plant"]) rd.fail(root, "plant section is required");
  if (!root["reference"]) rd.fail(root, "reference section is required");

  parse_plant(rd, root["plant"], cfg.plant);
  check_plant(rd, root["plant"], cfg.plant);
  const int n = cfg.plant.n();
  parse_reference(rd, root["reference"], cfg.reference, cfg.plant.relative_degree(), false);

  if (root["controller"]) {
    const std::string c = rd.text(root["controller"], "controller");
    if (c == "proposed") {
      cfg.controller = ControllerKind::proposed;
    } else if (c == "baseline") {
      cfg.controller = ControllerKind::baseline;
    } else {
      rd.fail(root["controller"], "controller must be 'proposed' or 'baseline', got '" + c + "'");
    }
  }
  if (root["structure"]) {
    const YAML::Node s = root["structure"];
    rd.require_map(s, "structure");
    rd.check_keys(s, "structure", {"omega", "h_den"});
    if (s["omega"]) {
      cfg.structure.omega = rd.polynomial(s["omega"], "structure.omega");
      require_design_poly(rd, s["omega"], *cfg.structure.omega, n - 1, "structure.omega");
    }
    if (s["h_den"]) {
      cfg.structure.h_den = rd.polynomial(s["h_den"], "structure.h_den");
      require_design_poly(rd, s["h_den"], *cfg.structure.h_den, cfg.plant.relative_degree(),
                          "structure.h_den");
    }
  }
  if (root["adaptation"]) parse_adaptation(rd, root["adaptation"], cfg.adaptation, n);
  if (root["baseline"]) parse_baseline(rd, root["baseline"], cfg.baseline, n);
  if (root["sim"]) parse_sim(rd, root["sim"], cfg.sim);
  if (root["diagnostics"]) cfg.diagnostics = rd.boolean(root["diagnostics"], "diagnostics");

  rd.anchored(root, [&] { cfg.validate(); });
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path, 0, 0, "cannot open file");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ScenarioConfig load_scenario_file(const std::string& path) {
  return parse_scenario(read_text_file(path), path);
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (auto b = builtin_scenario(name_or_path)) {
    return *b;
  }
  return load_scenario_file(name_or_path);
}

MatchingProblem parse_matching_problem(const std::string& text, const std::string& source) {
  const Reader rd(source);
  const YAML::Node root = load_root(text, source);
  rd.check_keys(root, "plant file", {"name", "plant", "reference", "structure"});
  if (!root["plant"]) rd.fail(root, "plant section is required");
  PlantModel plant;
  parse_plant(rd, root["plant"], plant);
  MatchingProblem mp;
  mp.plant_den = plant.p;
  mp.plant_num = plant.z;
  mp.kp = plant.kp;
  const int n_star = plant.relative_degree();
  mp.rm = Polynomial::binomial_power(1.0, std::max(n_star, 0));
  if (root["reference"]) {
    const YAML::Node r = root["reference"];
    rd.require_map(r, "reference");
    if (r["Rm"]) mp.rm = rd.polynomial(r["Rm"], "reference.Rm");
  }
  mp.omega = default_omega(std::max(plant.n(), 1));
  if (root["structure"]) {
    const YAML::Node s = root["structure"];
    rd.require_map(s, "structure");
    if (s["omega"]) mp.omega = rd.polynomial(s["omega"], "structure.omega");
  }
  return mp;
}

MatchingProblem load_matching_file(const std::string& path) {
  return parse_matching_problem(read_text_file(path), path);
}

namespace {

void emit_poly(YAML::Emitter& out, const char* key, const Polynomial& p) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double c : p.descending()) out << c;
  out << YAML::EndSeq;
}

void emit_values(YAML::Emitter& out, const char* key, const std::vector<double>& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double c : v) out << c;
  out << YAML::EndSeq;
}

const char* mode_name(Theta0Mode m) {
  return m == Theta0Mode::multipliers ? "multipliers" : "explicit";
}

}  // namespace

std::string scenario_to_yaml(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << cfg.name;

  out << YAML::Key << "plant" << YAML::Value << YAML::BeginMap;
  emit_poly(out, "P", cfg.plant.p);
  emit_poly(out, "Z", cfg.plant.z);
  out << YAML::Key << "kp" << YAML::Value << cfg.plant.kp;
  out << YAML::EndMap;

  out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
  emit_poly(out, "Rm", cfg.reference.rm);
  out << YAML::Key << "offset" << YAML::Value << cfg.reference.offset;
  out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
  for (const Sinusoid& s : cfg.reference.terms) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "amplitude" << YAML::Value << s.amplitude
        << YAML::Key << "frequency" << YAML::Value << s.frequency << YAML::Key << "phase"
        << YAML::Value << s.phase << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "controller" << YAML::Value
      << (cfg.controller == ControllerKind::proposed ? "proposed" : "baseline");

  out << YAML::Key << "structure" << YAML::Value << YAML::BeginMap;
  emit_poly(out, "omega", cfg.resolved_omega());
  emit_poly(out, "h_den", cfg.resolved_h_den());
  out << YAML::EndMap;

  const AdaptationSpec& a = cfg.adaptation;
  out << YAML::Key << "adaptation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "beta1" << YAML::Value << a.beta1;
  out << YAML::Key << "beta2" << YAML::Value << a.beta2;
  out << YAML::Key << "upsilon0_scale" << YAML::Value << a.upsilon0_scale;
  out << YAML::Key << "sigma_magnitude" << YAML::Value << a.sigma_magnitude;
  out << YAML::Key << "theta0" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << mode_name(a.theta0_mode);
  out << YAML::Key << "multipliers" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "theta1" << YAML::Value << a.multipliers.theta1;
  out << YAML::Key << "theta2" << YAML::Value << a.multipliers.theta2;
  out << YAML::Key << "theta3" << YAML::Value << a.multipliers.theta3;
  out << YAML::Key << "theta4" << YAML::Value << a.multipliers.theta4;
  out << YAML::Key << "theta_p" << YAML::Value << a.multipliers.theta_p;
  out << YAML::Key << "rho" << YAML::Value << a.multipliers.rho;
  out << YAML::Key << "lambda" << YAML::Value << a.multipliers.lambda;
  out << YAML::EndMap;
  if (!a.theta0_values.empty()) emit_values(out, "values", a.theta0_values);
  out << YAML::EndMap << YAML::EndMap;

  const BaselineSpec& b = cfg.baseline;
  out << YAML::Key << "baseline" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma_scale" << YAML::Value << b.gamma_scale;
  out << YAML::Key << "gamma" << YAML::Value << b.gamma;
  out << YAML::Key << "sign_kp" << YAML::Value
      << b.sign_kp.value_or(cfg.plant.kp < 0.0 ? -1 : 1);
  out << YAML::Key << "normalized" << YAML::Value << b.normalized;
  out << YAML::Key << "frozen" << YAML::Value << b.frozen;
  out << YAML::Key << "theta0" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << mode_name(b.theta0_mode);
  out << YAML::Key << "theta_multiplier" << YAML::Value << b.theta_multiplier;
  out << YAML::Key << "chi_multiplier" << YAML::Value << b.chi_multiplier;
  if (!b.theta0_values.empty()) emit_values(out, "values", b.theta0_values);
  out << YAML::Key << "chi0" << YAML::Value << b.chi0;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << cfg.sim.dt;
  out << YAML::Key << "t_final" << YAML::Value << cfg.sim.t_final;
  out << YAML::Key << "record_stride" << YAML::Value << cfg.sim.record_stride;
  out << YAML::EndMap;
  out << YAML::Key << "diagnostics" << YAML::Value << cfg.diagnostics;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mrac::app
