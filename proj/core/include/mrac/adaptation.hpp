#pragma once

#include <Eigen/Dense>

#include "mrac/lti.hpp"

namespace mrac {

/// Normalised least-squares design: positive beta1, beta2, Upsilon0 = Upsilon0' > 0
/// and the initial estimate Theta0.
struct AdaptationConfig {
  double beta1 = 1.0;
  double beta2 = 1.0;
  MatrixXd upsilon0;
  VectorXd theta0;

  /// Isotropic prior scale * I of the given size.
  static AdaptationConfig isotropic(Index size, double scale, double beta1 = 1.0,
                                    double beta2 = 1.0);
  void validate() const;
};

inline constexpr double kDefaultUpsilonScale = 1e3;
// Below this smallest eigenvalue the covariance is flagged as collapsed.
inline constexpr double kCovarianceCollapseEig = 1e-12;

/// m = sqrt(1 + beta1 Phi'Phi + beta2 Phi' Upsilon Phi).
double normalization(const Eigen::Ref<const VectorXd>& phi,
                     const Eigen::Ref<const MatrixXd>& upsilon, double beta1, double beta2);

struct AdaptationRates {
  VectorXd dtheta;
  MatrixXd dupsilon;
  double m = 1.0;
};

/// dTheta = -Upsilon Phi eps / m^2,  dUpsilon = -Upsilon Phi Phi' Upsilon / m^2.
AdaptationRates adaptation_derivatives(const Eigen::Ref<const VectorXd>& theta,
                                       const Eigen::Ref<const MatrixXd>& upsilon,
                                       const Eigen::Ref<const VectorXd>& phi, double eps_bar,
                                       double beta1, double beta2);

/// Allocation-free variant used in the closed-loop right-hand side.
/// Returns m.
double adaptation_derivatives_into(const Eigen::Ref<const MatrixXd>& upsilon,
                                   const Eigen::Ref<const VectorXd>& phi, double eps_bar,
                                   double beta1, double beta2, Eigen::Ref<VectorXd> dtheta,
                                   Eigen::Ref<MatrixXd> dupsilon);

struct LyapunovDiagnostics {
  double v = 0.0;        // Theta_err' Upsilon^{-1} Theta_err
  double min_eig = 0.0;  // smallest eigenvalue of Upsilon
  double condition = 1.0;
};

/// Throws SingularSystem if Upsilon is not numerically positive definite.
LyapunovDiagnostics lyapunov_diagnostics(const Eigen::Ref<const VectorXd>& theta,
                                         const Eigen::Ref<const MatrixXd>& upsilon,
                                         const Eigen::Ref<const VectorXd>& theta_star);

/// || Theta_err(t) - Upsilon(t) Upsilon0^{-1} Theta_err(0) ||_2, the closed-form
/// solution of the update law along exact linear-regression trajectories.
double solution_identity_residual(const Eigen::Ref<const VectorXd>& theta,
                                  const Eigen::Ref<const MatrixXd>& upsilon,
                                  const AdaptationConfig& config,
                                  const Eigen::Ref<const VectorXd>& theta_star);

/// Caches Upsilon0^{-1} Theta_err(0) for repeated residual evaluations.
class SolutionIdentity {
 public:
  SolutionIdentity(const AdaptationConfig& config, const Eigen::Ref<const VectorXd>& theta_star);
  double residual(const Eigen::Ref<const VectorXd>& theta,
                  const Eigen::Ref<const MatrixXd>& upsilon) const;
  double initial_error_norm() const noexcept { return initial_error_norm_; }

 private:
  VectorXd theta_star_;
  VectorXd weighted_initial_;
  double initial_error_norm_ = 0.0;
};

}  // namespace mrac
