#pragma once

#include <Eigen/Dense>

#include "mrac/adaptation.hpp"
#include "mrac/lti.hpp"
#include "mrac/polynomial.hpp"

namespace mrac {

/// Orders and design polynomials of the singularity-free controller.
struct MracStructure {
  int n = 0;
  int m = 0;
  int n_star = 0;
  Polynomial omega;  // monic Hurwitz, degree n-1
  Polynomial rm;     // monic Hurwitz, degree n*
  Polynomial h_den;  // monic Hurwitz, degree n*; H(s) = 1/h_den(s)

  /// Validates degrees and Hurwitz-ness; throws InvalidArgument.
  static MracStructure make(int n, int m, Polynomial omega, Polynomial rm, Polynomial h_den);
};

/// Index layout of Theta = [th(2n); th_p(2n); rho; lambda].
struct ThetaLayout {
  Index n = 0;

  Index size() const noexcept { return 4 * n + 2; }
  Index bar_size() const noexcept { return 4 * n + 1; }   // [th; th_p; rho]
  Index omega_size() const noexcept { return 4 * n + 1; }
  Index phi_size() const noexcept { return 2 * n; }
  Index theta_begin() const noexcept { return 0; }
  Index theta_p_begin() const noexcept { return 2 * n; }
  Index rho_index() const noexcept { return 4 * n; }
  Index lambda_index() const noexcept { return 4 * n + 1; }
};

// ---------------------------------------------------------------------------
// Algebraic pieces of the control law and error pipeline
// ---------------------------------------------------------------------------

/// phi = [phi1; phi2; y; r].
VectorXd assemble_phi(const Eigen::Ref<const VectorXd>& phi1,
                      const Eigen::Ref<const VectorXd>& phi2, double y, double r);

/// u = (th' phi + sigma th_p' phi) / (1 + sigma rho).
/// Throws ContractViolation when |1 + sigma rho| < 1e-12.
double control_input(const Eigen::Ref<const VectorXd>& theta_full,
                     const Eigen::Ref<const VectorXd>& phi, double sigma);

/// omega = [phi; sigma phi; -sigma u].
VectorXd build_omega(const Eigen::Ref<const VectorXd>& phi, double sigma, double u);

/// eps_bar = ebar + eta / (sigma + lambda).
double estimation_error(double ebar, double eta, double sigma, double lambda);

/// Phi = [zeta; ebar] / (sigma + lambda).
VectorXd build_Phi(const Eigen::Ref<const VectorXd>& zeta, double ebar, double sigma,
                   double lambda);

/// Piecewise-constant tuning gain. With s = sign(rho) + sign(lambda):
/// +magnitude if s >= 1 or rho = lambda = 0, -magnitude if s <= -1, else 0.
double tuning_gain(double rho, double lambda, double magnitude = 1.0);

struct SingularityMargins {
  double control = 1.0;     // 1 + sigma rho
  double estimation = 1.0;  // sigma + lambda
};
SingularityMargins singularity_margins(double sigma, double rho, double lambda);

inline constexpr double kHardSingularity = 1e-12;
inline constexpr double kNearSingularWarning = 1e-9;

// ---------------------------------------------------------------------------
// Controller dynamics
// ---------------------------------------------------------------------------

/// Offsets of the controller's sub-states inside one flat vector:
/// [phi1 | phi2 | ebar path | zeta bank | eta path | Theta | vec(Upsilon)].
struct ControllerLayout {
  Index phi1 = 0, phi2 = 0, ebar = 0, zeta = 0, eta = 0, theta = 0, upsilon = 0, size = 0;
  Index filter_order = 0;  // n - 1
  Index h_order = 0;       // n*
  Index params = 0;        // 4n + 2
};

/// Everything the law computes from the current state (sigma frozen).
struct MracSignals {
  VectorXd phi1, phi2, phi, omega, zeta, phi_reg;
  double u = 0.0;
  double ebar = 0.0;
  double eta = 0.0;
  double filtered_bar_omega = 0.0;  // H[thbar' omega]
  double eps_bar = 0.0;
  double m_norm = 1.0;
  double sigma = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  SingularityMargins margins;
};

/// Flat controller state plus the step-frozen tuning gain.
struct ControllerState {
  VectorXd x;
  double sigma = 1.0;
  double last_u = 0.0;
};

/// The proposed adaptive law as an ODE subsystem with inputs (y, r, e).
class MracController {
 public:
  MracController(MracStructure structure, AdaptationConfig adaptation,
                 double sigma_magnitude = 1.0);

  const MracStructure& structure() const noexcept { return structure_; }
  const AdaptationConfig& adaptation() const noexcept { return adaptation_; }
  const ControllerLayout& layout() const noexcept { return layout_; }
  ThetaLayout theta_layout() const noexcept { return ThetaLayout{structure_.n}; }
  Index state_size() const noexcept { return layout_.size; }
  double sigma_magnitude() const noexcept { return sigma_magnitude_; }

  /// Zero filter states, Theta0, Upsilon0; sigma chosen from Theta0.
  ControllerState initial_state() const;

  /// Tuning gain for the current estimate (to be frozen over a step).
  double select_sigma(const Eigen::Ref<const VectorXd>& x) const;

  /// Algebraic evaluation at the current state; y, r, e are plant output,
  /// reference input and tracking error at the same instant.
  void evaluate(const Eigen::Ref<const VectorXd>& x, double y, double r, double e,
                double sigma, MracSignals& out) const;
  MracSignals evaluate(const Eigen::Ref<const VectorXd>& x, double y, double r, double e,
                       double sigma) const;

  /// Time derivative of the controller state given already evaluated signals.
  void derivative(const Eigen::Ref<const VectorXd>& x, const MracSignals& s, double y, double e,
                  Eigen::Ref<VectorXd> dx) const;

  // Views into a flat state vector.
  Eigen::Map<const VectorXd> theta(const VectorXd& x) const {
    return {x.data() + layout_.theta, layout_.params};
  }
  Eigen::Map<const MatrixXd> upsilon(const VectorXd& x) const {
    return {x.data() + layout_.upsilon, layout_.params, layout_.params};
  }
  Eigen::Map<VectorXd> theta(VectorXd& x) const { return {x.data() + layout_.theta, layout_.params}; }
  Eigen::Map<MatrixXd> upsilon(VectorXd& x) const {
    return {x.data() + layout_.upsilon, layout_.params, layout_.params};
  }
  /// (Upsilon + Upsilon')/2 in place.
  void symmetrize(VectorXd& x) const;

  const StateSpaceBlock& omega_filter() const noexcept { return omega_filter_; }
  const StateSpaceBlock& ebar_filter() const noexcept { return ebar_filter_; }
  const VectorFilter& zeta_bank() const noexcept { return zeta_bank_; }
  const StateSpaceBlock& h_filter() const noexcept { return h_filter_; }

 private:
  MracStructure structure_;
  AdaptationConfig adaptation_;
  double sigma_magnitude_;
  ControllerLayout layout_;
  StateSpaceBlock omega_filter_;  // 1/Omega; its states are b(s)/Omega
  StateSpaceBlock ebar_filter_;   // Rm/h_den (biproper)
  StateSpaceBlock h_filter_;      // 1/h_den
  VectorFilter zeta_bank_;        // 1/h_den on each omega channel
};

// ---------------------------------------------------------------------------
// Stepwise helpers (inputs held over the step, RK4)
// ---------------------------------------------------------------------------

struct RegressorOutputs {
  VectorXd phi1;
  VectorXd phi2;
};

/// Advance the b(s)/Omega(s) filters on u and y; returns phi1, phi2 at the new time.
RegressorOutputs update_regressor_filters(const MracController& ctrl, ControllerState& state,
                                          double u, double y, double dt);

/// Advance the H(s)Rm(s) path on e; returns ebar at the new time.
double tracking_error_bar(const MracController& ctrl, ControllerState& state, double e,
                          double dt);

struct AuxSignals {
  VectorXd zeta;
  double eta = 0.0;
};

/// Advance zeta = H[omega] and H[thbar' omega]; returns zeta and
/// eta = thbar' zeta - H[thbar' omega] at the new time (thbar from Theta).
AuxSignals aux_signals(const MracController& ctrl, ControllerState& state,
                       const Eigen::Ref<const VectorXd>& omega,
                       const Eigen::Ref<const VectorXd>& theta_full, double dt);

}  // namespace mrac
