#pragma once

#include "mrac/harness.hpp"

namespace mrac {

struct MetricsSummary {
  double rms_e_final_window = 0.0;      // last 20% of the recorded run
  double rms_ystar_final_window = 0.0;
  double tracking_ratio = 0.0;          // 0 when e vanishes on the window
  long sigma_switch_count = 0;
  double max_abs_u = 0.0;
  double min_margin_u = 0.0;
  double min_abs_margin_lambda = 0.0;
  double theta_settling = 0.0;          // ||Theta(tf) - Theta(tf/2)||
  double theta_settling_tolerance = 0.0;  // 0.05 (1 + ||Theta(tf/2)||)
  long v_monotonicity_violations = 0;
  double theta_dot_sq_integral = 0.0;
  // Extras beyond the core set.
  bool all_finite = true;
  bool sigma_constant_second_half = true;
  double final_sigma = 0.0;
  double max_regression_residual = 0.0;
  double max_solution_residual = 0.0;
  double max_v_increase = 0.0;
  double min_eig_upsilon = 0.0;
  long near_singular_steps = 0;
  double t_end = 0.0;
};

inline constexpr double kFinalWindowFraction = 0.2;
inline constexpr double kSettlingFraction = 0.05;

double rms(const std::vector<double>& v);
/// Summary of a completed or aborted record. tracking_ratio is
/// RMS(e) / RMS(y*) on samples with t >= 0.8 t_end.
MetricsSummary compute_metrics(const RunRecord& record);

}  // namespace mrac
