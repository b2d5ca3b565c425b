#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrac/adaptation.hpp"
#include "mrac/baseline.hpp"
#include "mrac/controller.hpp"
#include "mrac/matching.hpp"
#include "mrac/plant.hpp"

namespace mrac {

enum class ControllerKind { proposed, baseline };
enum class Theta0Mode { explicit_values, multipliers };

/// Per-block multipliers of the matched gains, e.g. 1.2 th1*, 0.9 th_p*.
struct ProposedMultipliers {
  double theta1 = 1.0;
  double theta2 = 1.0;
  double theta3 = 1.0;
  double theta4 = 1.0;
  double theta_p = 1.0;
  double rho = 1.0;
  double lambda = 1.0;
};

struct AdaptationSpec {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double upsilon0_scale = kDefaultUpsilonScale;
  double sigma_magnitude = 1.0;
  Theta0Mode theta0_mode = Theta0Mode::multipliers;
  ProposedMultipliers multipliers;
  std::vector<double> theta0_values;  // explicit mode, length 4n+2
};

struct BaselineSpec {
  double gamma_scale = kDefaultBaselineGamma;  // Gamma = gamma_scale * I
  double gamma = kDefaultBaselineGamma;
  std::optional<int> sign_kp;  // defaults to the plant's sign
  bool normalized = false;
  bool frozen = false;         // no adaptation (certainty equivalence)
  Theta0Mode theta0_mode = Theta0Mode::multipliers;
  double theta_multiplier = 1.0;
  double chi_multiplier = 1.0;
  std::vector<double> theta0_values;  // explicit mode, length 2n
  double chi0 = 1.0;                  // explicit mode
};

struct StructureSpec {
  std::optional<Polynomial> omega;  // default (s+1)^{n-1}
  std::optional<Polynomial> h_den;  // default Rm
};

struct SimSpec {
  double dt = 1e-3;
  double t_final = 200.0;
  int record_stride = 10;
};

struct ScenarioConfig {
  std::string name = "custom";
  PlantModel plant;
  ReferenceModel reference;
  ControllerKind controller = ControllerKind::proposed;
  StructureSpec structure;
  AdaptationSpec adaptation;
  BaselineSpec baseline;
  SimSpec sim;
  // Compute Theta*-based diagnostics (V, regression and solution identities).
  bool diagnostics = true;

  void validate() const;
  Polynomial resolved_omega() const;
  Polynomial resolved_h_den() const;
  MatchingProblem matching_problem() const;
};

enum class BoeingCase { i, ii };

// Prior used by the built-in Boeing runs and the synthetic sweeps. The
// 1e3 library default leaves Case (ii) far from converged at 200 s.
inline constexpr double kLargePriorScale = 1e9;

/// Boeing 737 plant with the published design; Case (i) starts with the
/// right sign of kp, Case (ii) with the wrong one.
ScenarioConfig boeing_scenario(BoeingCase which);
/// Boeing plant under the traditional law with sign(kp) = -1.
ScenarioConfig boeing_baseline_scenario();

/// Theta0 from the configured mode (multipliers need the matched gains).
VectorXd resolve_theta0(const ScenarioConfig& cfg, const std::optional<MatchedGains>& gains);

struct StateLayout {
  Index plant = 0, reference = 0, controller = 0, size = 0;
  Index plant_size = 0, reference_size = 0, controller_size = 0;
};

/// Plant, reference model and controller joined into one ODE.
class ClosedLoop {
 public:
  explicit ClosedLoop(const ScenarioConfig& cfg);

  const ScenarioConfig& config() const noexcept { return cfg_; }
  const StateLayout& layout() const noexcept { return layout_; }
  Index state_size() const noexcept { return layout_.size; }
  const std::optional<MatchedGains>& matched_gains() const noexcept { return gains_; }
  bool is_proposed() const noexcept { return std::holds_alternative<MracController>(ctrl_); }
  const MracController& proposed() const { return std::get<MracController>(ctrl_); }
  const BaselineController& baseline() const { return std::get<BaselineController>(ctrl_); }

  VectorXd initial_state() const;
  /// Tuning gain to freeze over the next step (0 for the baseline).
  double select_sigma(const VectorXd& x) const;
  /// Right-hand side with sigma held; pure and deterministic.
  VectorXd derivative(double t, const VectorXd& x, double sigma) const;
  void derivative(double t, const VectorXd& x, double sigma, VectorXd& dx) const;

  double output(const VectorXd& x) const;            // y
  double reference_output(const VectorXd& x) const;  // y*
  double reference_input(double t) const { return cfg_.reference.r(t); }
  /// Symmetrises Upsilon after a step (no-op for the baseline).
  void post_step(VectorXd& x) const;

  Eigen::Map<const VectorXd> controller_state(const VectorXd& x) const {
    return {x.data() + layout_.controller, layout_.controller_size};
  }

 private:
  ScenarioConfig cfg_;
  StateLayout layout_;
  StateSpaceBlock plant_;
  StateSpaceBlock reference_;
  std::optional<MatchedGains> gains_;
  std::variant<MracController, BaselineController> ctrl_;
};

/// (layout, derivative) of a scenario.
ClosedLoop assemble_closed_loop(const ScenarioConfig& cfg);

struct Sample {
  double t = 0.0;
  double y = 0.0;
  double y_star = 0.0;
  double e = 0.0;
  double u = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double eps_bar = 0.0;
  double m_norm = 1.0;
  double margin_u = 1.0;
  double margin_lambda = 1.0;
  double v = std::numeric_limits<double>::quiet_NaN();
  double min_eig_upsilon = std::numeric_limits<double>::quiet_NaN();
};

/// Quantities that need every integration step, not just recorded samples.
struct StepStatistics {
  long steps = 0;
  long sigma_switches = 0;
  double min_margin_u = std::numeric_limits<double>::infinity();
  double min_abs_margin_lambda = std::numeric_limits<double>::infinity();
  long near_singular_steps = 0;  // |sigma + lambda| < 1e-9
  double max_abs_u = 0.0;
  double theta_dot_sq_integral = 0.0;
  // Theta* diagnostics (proposed controller only).
  double max_regression_residual = 0.0;  // |eps - err'Phi| / (1 + |eps|)
  double max_solution_residual = 0.0;    // ||err - Ups Ups0^{-1} err0||
  long v_violations = 0;                 // V_k - V_{k-1} > 1e-8 (1 + V_{k-1})
  double max_v_increase = 0.0;           // largest (V_k - V_{k-1}) / (1 + V_{k-1})
  double min_eig_upsilon = std::numeric_limits<double>::infinity();
  bool covariance_collapse = false;
};

inline constexpr double kVMonotonicityTol = 1e-8;

struct RunRecord {
  ScenarioConfig config;
  std::vector<Sample> samples;
  std::vector<VectorXd> theta_samples;  // Theta (proposed) or [theta; chi] (baseline)
  StepStatistics stats;
  bool has_theta_star = false;
  VectorXd theta_star;
  double initial_error_norm = 0.0;  // ||Theta(0) - Theta*||
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
  std::vector<std::string> warnings;
};

/// Integrates the scenario with fixed-step RK4 and records every
/// `record_stride` steps. Never throws for divergence: the record is
/// returned with aborted = true and the reason.
RunRecord run_scenario(const ScenarioConfig& cfg);

}  // namespace mrac
