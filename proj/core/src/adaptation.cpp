#include "mrac/adaptation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

AdaptationConfig AdaptationConfig::isotropic(Index size, double scale, double beta1,
                                             double beta2) {
  AdaptationConfig cfg;
  cfg.beta1 = beta1;
  cfg.beta2 = beta2;
  cfg.upsilon0 = scale * MatrixXd::Identity(size, size);
  cfg.theta0 = VectorXd::Zero(size);
  return cfg;
}

void AdaptationConfig::validate() const {
  if (!(beta1 > 0.0) || !(beta2 > 0.0)) {
    throw InvalidArgument("beta1 and beta2 must be positive");
  }
  if (upsilon0.rows() != upsilon0.cols() || upsilon0.rows() != theta0.size()) {
    throw InvalidArgument("Upsilon0 must be square with the size of Theta0");
  }
  if ((upsilon0 - upsilon0.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, upsilon0.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("Upsilon0 must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(upsilon0, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidArgument("Upsilon0 must be positive definite");
  }
}

double normalization(const Eigen::Ref<const VectorXd>& phi,
                     const Eigen::Ref<const MatrixXd>& upsilon, double beta1, double beta2) {
  const double radicand =
      1.0 + beta1 * phi.squaredNorm() + beta2 * phi.dot(upsilon * phi);
  if (!(radicand >= 0.0)) {
    std::ostringstream os;
    os << "normalization radicand is negative (" << radicand << "); Upsilon lost definiteness";
    throw ContractViolation(os.str());
  }
  return std::sqrt(radicand);
}

double adaptation_derivatives_into(const Eigen::Ref<const MatrixXd>& upsilon,
                                   const Eigen::Ref<const VectorXd>& phi, double eps_bar,
                                   double beta1, double beta2, Eigen::Ref<VectorXd> dtheta,
                                   Eigen::Ref<MatrixXd> dupsilon) {
  const VectorXd up = upsilon * phi;
  const double radicand = 1.0 + beta1 * phi.squaredNorm() + beta2 * phi.dot(up);
  if (!(radicand >= 0.0)) {
    std::ostringstream os;
    os << "normalization radicand is negative (" << radicand << "); Upsilon lost definiteness";
    throw ContractViolation(os.str());
  }
  const double inv_m2 = 1.0 / radicand;
  dtheta.noalias() = (-eps_bar * inv_m2) * up;
  dupsilon.noalias() = (-inv_m2) * up * up.transpose();
  return std::sqrt(radicand);
}

AdaptationRates adaptation_derivatives(const Eigen::Ref<const VectorXd>& theta,
                                       const Eigen::Ref<const MatrixXd>& upsilon,
                                       const Eigen::Ref<const VectorXd>& phi, double eps_bar,
                                       double beta1, double beta2) {
  if (theta.size() != phi.size() || upsilon.rows() != phi.size() ||
      upsilon.cols() != phi.size()) {
    throw InvalidArgument("adaptation_derivatives: dimension mismatch");
  }
  AdaptationRates r;
  r.dtheta.resize(phi.size());
  r.dupsilon.resize(phi.size(), phi.size());
  r.m = adaptation_derivatives_into(upsilon, phi, eps_bar, beta1, beta2, r.dtheta, r.dupsilon);
  return r;
}

LyapunovDiagnostics lyapunov_diagnostics(const Eigen::Ref<const VectorXd>& theta,
                                         const Eigen::Ref<const MatrixXd>& upsilon,
                                         const Eigen::Ref<const VectorXd>& theta_star) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(upsilon);
  const VectorXd& ev = es.eigenvalues();
  LyapunovDiagnostics d;
  d.min_eig = ev.minCoeff();
  const double max_eig = ev.maxCoeff();
  d.condition = d.min_eig > 0.0 ? max_eig / d.min_eig : std::numeric_limits<double>::infinity();
  if (!(d.min_eig > 0.0) || d.condition > 1e15) {
    std::ostringstream os;
    os << "Upsilon is numerically singular (min eigenvalue " << d.min_eig
       << ", condition estimate " << d.condition << ")";
    throw SingularSystem(os.str(), d.condition);
  }
  // V = err' Q diag(1/ev) Q' err, using the eigendecomposition we already have.
  const VectorXd proj = es.eigenvectors().transpose() * (theta - theta_star);
  d.v = (proj.array().square() / ev.array()).sum();
  return d;
}

SolutionIdentity::SolutionIdentity(const AdaptationConfig& config,
                                   const Eigen::Ref<const VectorXd>& theta_star)
    : theta_star_(theta_star) {
  const VectorXd err0 = config.theta0 - theta_star;
  initial_error_norm_ = err0.norm();
  weighted_initial_ = config.upsilon0.ldlt().solve(err0);
}

double SolutionIdentity::residual(const Eigen::Ref<const VectorXd>& theta,
                                  const Eigen::Ref<const MatrixXd>& upsilon) const {
  return ((theta - theta_star_) - upsilon * weighted_initial_).norm();
}

double solution_identity_residual(const Eigen::Ref<const VectorXd>& theta,
                                  const Eigen::Ref<const MatrixXd>& upsilon,
                                  const AdaptationConfig& config,
                                  const Eigen::Ref<const VectorXd>& theta_star) {
  return SolutionIdentity(config, theta_star).residual(theta, upsilon);
}

}  // namespace mrac
