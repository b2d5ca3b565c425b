#include "mrac_app/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mrac_app/scenario_io.hpp"

namespace mrac::app {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> csv_columns(const RunRecord& record) {
  std::vector<std::string> cols{"t",     "y",      "y_star",  "e",        "u",        "sigma",
                                "rho",   "lambda", "eps_bar", "m_norm",   "margin_u", "margin_lambda"};
  if (record.has_theta_star) {
    cols.emplace_back("V");
    cols.emplace_back("min_eig_upsilon");
  }
  return cols;
}

std::string record_to_csv(const RunRecord& record) {
  std::string out;
  const auto cols = csv_columns(record);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += (i ? "," : "") + cols[i];
  }
  out += '\n';
  out.reserve(record.samples.size() * 24 * cols.size());
  for (const Sample& s : record.samples) {
    const double vals[] = {s.t,      s.y,      s.y_star,  s.e,      s.u,        s.sigma, s.rho,
                           s.lambda, s.eps_bar, s.m_norm, s.margin_u, s.margin_lambda, s.v,
                           s.min_eig_upsilon};
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += format_double(vals[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                  " cells, header has " + std::to_string(t.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

// JSON has no inf/nan; those become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json poly(const Polynomial& p) {
  json a = json::array();
  for (double c : p.descending()) a.push_back(c);
  return a;
}

}  // namespace

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["plant"] = {{"P", poly(cfg.plant.p)}, {"Z", poly(cfg.plant.z)}, {"kp", cfg.plant.kp}};
  json terms = json::array();
  for (const Sinusoid& s : cfg.reference.terms) {
    terms.push_back({{"amplitude", s.amplitude}, {"frequency", s.frequency}, {"phase", s.phase}});
  }
  j["reference"] = {{"Rm", poly(cfg.reference.rm)}, {"offset", cfg.reference.offset},
                    {"terms", terms}};
  j["controller"] = cfg.controller == ControllerKind::proposed ? "proposed" : "baseline";
  j["structure"] = {{"omega", poly(cfg.resolved_omega())}, {"h_den", poly(cfg.resolved_h_den())}};
  const AdaptationSpec& a = cfg.adaptation;
  const ProposedMultipliers& k = a.multipliers;
  j["adaptation"] = {
      {"beta1", a.beta1},
      {"beta2", a.beta2},
      {"upsilon0_scale", a.upsilon0_scale},
      {"sigma_magnitude", a.sigma_magnitude},
      {"theta0",
       {{"mode", a.theta0_mode == Theta0Mode::multipliers ? "multipliers" : "explicit"},
        {"multipliers",
         {{"theta1", k.theta1},
          {"theta2", k.theta2},
          {"theta3", k.theta3},
          {"theta4", k.theta4},
          {"theta_p", k.theta_p},
          {"rho", k.rho},
          {"lambda", k.lambda}}},
        {"values", a.theta0_values}}}};
  const BaselineSpec& b = cfg.baseline;
  j["baseline"] = {
      {"gamma_scale", b.gamma_scale},
      {"gamma", b.gamma},
      {"sign_kp", b.sign_kp.value_or(cfg.plant.kp < 0.0 ? -1 : 1)},
      {"normalized", b.normalized},
      {"frozen", b.frozen},
      {"theta0",
       {{"mode", b.theta0_mode == Theta0Mode::multipliers ? "multipliers" : "explicit"},
        {"theta_multiplier", b.theta_multiplier},
        {"chi_multiplier", b.chi_multiplier},
        {"values", b.theta0_values},
        {"chi0", b.chi0}}}};
  j["sim"] = {{"dt", cfg.sim.dt},
              {"t_final", cfg.sim.t_final},
              {"record_stride", cfg.sim.record_stride}};
  j["diagnostics"] = cfg.diagnostics;
  return j;
}

json metrics_to_json(const MetricsSummary& m) {
  return {
      {"rms_e_final_window", num(m.rms_e_final_window)},
      {"rms_ystar_final_window", num(m.rms_ystar_final_window)},
      {"tracking_ratio", num(m.tracking_ratio)},
      {"sigma_switch_count", m.sigma_switch_count},
      {"max_abs_u", num(m.max_abs_u)},
      {"min_margin_u", num(m.min_margin_u)},
      {"min_abs_margin_lambda", num(m.min_abs_margin_lambda)},
      {"theta_settling", num(m.theta_settling)},
      {"theta_settling_tolerance", num(m.theta_settling_tolerance)},
      {"V_monotonicity_violations", m.v_monotonicity_violations},
      {"theta_dot_sq_integral", num(m.theta_dot_sq_integral)},
      {"all_finite", m.all_finite},
      {"sigma_constant_second_half", m.sigma_constant_second_half},
      {"final_sigma", num(m.final_sigma)},
      {"max_regression_residual", num(m.max_regression_residual)},
      {"max_solution_residual", num(m.max_solution_residual)},
      {"max_v_increase", num(m.max_v_increase)},
      {"min_eig_upsilon", num(m.min_eig_upsilon)},
      {"near_singular_steps", m.near_singular_steps},
      {"t_end", num(m.t_end)},
  };
}

json summary_json(const RunRecord& record, const MetricsSummary& m) {
  json j;
  j["tool"] = "mrac";
  j["version"] = kToolVersion;
  j["scenario"] = record.config.name;
  j["status"] = record.aborted ? "aborted" : "completed";
  if (record.aborted) {
    j["abort_reason"] = record.abort_reason;
    j["abort_time"] = record.abort_time;
  }
  j["metrics"] = metrics_to_json(m);
  j["samples"] = record.samples.size();
  j["steps"] = record.stats.steps;
  if (record.has_theta_star) {
    j["theta_star"] = vec(record.theta_star);
    j["initial_error_norm"] = num(record.initial_error_norm);
  }
  if (!record.theta_samples.empty()) {
    j["theta_final"] = vec(record.theta_samples.back());
  }
  j["warnings"] = record.warnings;
  j["config"] = config_to_json(record.config);
  return j;
}

json matched_gains_json(const MatchedGains& g, double residual) {
  return {{"theta1", vec(g.theta1)},
          {"theta2", vec(g.theta2)},
          {"theta3", g.theta3},
          {"theta4", g.theta4},
          {"theta_p", vec(g.theta_p)},
          {"rho_star", g.rho_star},
          {"lambda_star", g.lambda_star},
          {"theta_star", vec(g.theta_star_full)},
          {"condition_number", num(g.condition_number)},
          {"ill_conditioned", g.ill_conditioned},
          {"max_abs_residual", num(residual)},
          {"warnings", g.warnings}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

OutputBundle write_outputs(const RunRecord& record, const MetricsSummary& m,
                           const std::filesystem::path& out_dir) {
  OutputBundle b;
  const std::string stem = record.config.name.empty() ? "run" : record.config.name;
  b.timeseries = out_dir / (stem + ".csv");
  b.summary = out_dir / (stem + ".summary.json");
  b.config_echo = out_dir / (stem + ".config.yaml");
  write_file_atomic(b.timeseries, record_to_csv(record));
  write_file_atomic(b.summary, summary_json(record, m).dump(2) + "\n");
  write_file_atomic(b.config_echo, scenario_to_yaml(record.config));
  return b;
}

}  // namespace mrac::app
