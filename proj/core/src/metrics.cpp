#include "mrac/metrics.hpp"

#include <cmath>

namespace mrac {

double rms(const std::vector<double>& v) {
  if (v.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

namespace {

bool sample_finite(const Sample& s) {
  return std::isfinite(s.t) && std::isfinite(s.y) && std::isfinite(s.y_star) &&
         std::isfinite(s.e) && std::isfinite(s.u) && std::isfinite(s.rho) &&
         std::isfinite(s.lambda) && std::isfinite(s.eps_bar) && std::isfinite(s.m_norm);
}

}  // namespace

MetricsSummary compute_metrics(const RunRecord& record) {
  MetricsSummary m;
  const StepStatistics& st = record.stats;
  m.sigma_switch_count = st.sigma_switches;
  m.max_abs_u = st.max_abs_u;
  m.min_margin_u = st.min_margin_u;
  m.min_abs_margin_lambda = st.min_abs_margin_lambda;
  m.v_monotonicity_violations = st.v_violations;
  m.theta_dot_sq_integral = st.theta_dot_sq_integral;
  m.max_regression_residual = st.max_regression_residual;
  m.max_solution_residual = st.max_solution_residual;
  m.max_v_increase = st.max_v_increase;
  m.min_eig_upsilon = st.min_eig_upsilon;
  m.near_singular_steps = st.near_singular_steps;
  m.all_finite = !record.aborted;

  const auto& s = record.samples;
  if (s.empty()) {
    return m;
  }
  m.t_end = s.back().t;
  m.final_sigma = s.back().sigma;

  std::vector<double> e_win, ys_win;
  const double t_win = (1.0 - kFinalWindowFraction) * m.t_end;
  const double t_half = 0.5 * m.t_end;
  std::size_t half_idx = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    m.all_finite = m.all_finite && sample_finite(s[i]);
    if (s[i].t >= t_win) {
      e_win.push_back(s[i].e);
      ys_win.push_back(s[i].y_star);
    }
    if (s[i].t <= t_half) {
      half_idx = i;
    } else if (s[i].sigma != s.back().sigma) {
      m.sigma_constant_second_half = false;
    }
  }
  m.rms_e_final_window = rms(e_win);
  m.rms_ystar_final_window = rms(ys_win);
  if (m.rms_e_final_window == 0.0) {
    m.tracking_ratio = 0.0;
  } else if (m.rms_ystar_final_window == 0.0) {
    m.tracking_ratio = std::numeric_limits<double>::infinity();
  } else {
    m.tracking_ratio = m.rms_e_final_window / m.rms_ystar_final_window;
  }

  if (!record.theta_samples.empty() && record.theta_samples.size() == s.size()) {
    const VectorXd& mid = record.theta_samples[half_idx];
    m.theta_settling = (record.theta_samples.back() - mid).norm();
    m.theta_settling_tolerance = kSettlingFraction * (1.0 + mid.norm());
  }
  return m;
}

}  // namespace mrac
