#include "mrac/baseline.hpp"

#include <cmath>

#include "mrac/errors.hpp"

namespace mrac {

void BaselineConfig::validate(Index n) const {
  if (sign_kp != 1 && sign_kp != -1) {
    throw InvalidArgument("baseline sign_kp must be +1 or -1");
  }
  if (!(gamma > 0.0)) {
    throw InvalidArgument("baseline gamma must be positive");
  }
  if (gamma_matrix.rows() != 2 * n || gamma_matrix.cols() != 2 * n) {
    throw InvalidArgument("baseline Gamma must be 2n x 2n");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(gamma_matrix, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidArgument("baseline Gamma must be positive definite");
  }
  if (theta0.size() != 2 * n) {
    throw InvalidArgument("baseline theta0 must have length 2n");
  }
}

double baseline_control(const Eigen::Ref<const VectorXd>& theta,
                        const Eigen::Ref<const VectorXd>& phi) {
  if (theta.size() != phi.size()) {
    throw InvalidArgument("baseline_control: theta and phi lengths differ");
  }
  return theta.dot(phi);
}

BaselineError baseline_estimation_error(double e, const Eigen::Ref<const VectorXd>& theta,
                                        double chi, const Eigen::Ref<const VectorXd>& varphi,
                                        double filtered_control) {
  BaselineError out;
  out.mu = theta.dot(varphi) - filtered_control;
  out.eps = e + chi * out.mu;
  return out;
}

BaselineRates baseline_update(double eps, const Eigen::Ref<const VectorXd>& varphi, double mu,
                              const Eigen::Ref<const MatrixXd>& gamma_matrix, double gamma,
                              int sign_kp, bool normalized) {
  const double scale = normalized ? 1.0 / (1.0 + varphi.squaredNorm() + mu * mu) : 1.0;
  BaselineRates r;
  r.dtheta = (-static_cast<double>(sign_kp) * eps * scale) * (gamma_matrix * varphi);
  r.dchi = -gamma * eps * mu * scale;
  return r;
}

BaselineController::BaselineController(int n, int m, Polynomial omega, Polynomial rm,
                                       BaselineConfig config)
    : n_(n), config_(std::move(config)) {
  if (n < 1 || m < 0 || m >= n) {
    throw InvalidArgument("baseline structure needs n >= 1 and 0 <= m < n");
  }
  config_.validate(n);
  if (omega.degree() != n - 1 || !omega.is_monic(1e-12) || (n > 1 && !is_hurwitz(omega))) {
    throw InvalidArgument("Omega must be monic Hurwitz of degree n-1");
  }
  if (rm.degree() != n - m || !rm.is_monic(1e-12) || !is_hurwitz(rm)) {
    throw InvalidArgument("Rm must be monic Hurwitz of degree n*");
  }
  omega_filter_ = realize_ccf(RationalTF{Polynomial{1.0}, omega, 1.0});
  rm_filter_ = realize_ccf(RationalTF{Polynomial{1.0}, rm, 1.0});
  varphi_bank_ = VectorFilter(rm_filter_, 2 * n);

  BaselineLayout& L = layout_;
  L.filter_order = n - 1;
  L.rm_order = n - m;
  Index off = 0;
  L.phi1 = off;
  off += L.filter_order;
  L.phi2 = off;
  off += L.filter_order;
  L.varphi = off;
  off += varphi_bank_.state_size();
  L.mu = off;
  off += L.rm_order;
  L.theta = off;
  off += 2 * n;
  L.chi = off;
  off += 1;
  L.size = off;
}

VectorXd BaselineController::initial_state() const {
  VectorXd x = VectorXd::Zero(layout_.size);
  x.segment(layout_.theta, 2 * n_) = config_.theta0;
  x(layout_.chi) = config_.chi0;
  return x;
}

BaselineSignals BaselineController::evaluate(const Eigen::Ref<const VectorXd>& x, double y,
                                             double r, double e) const {
  const BaselineLayout& L = layout_;
  BaselineSignals s;
  VectorXd phi1 = x.segment(L.phi1, L.filter_order);
  VectorXd phi2 = x.segment(L.phi2, L.filter_order);
  s.phi.resize(2 * n_);
  s.phi << phi1, phi2, y, r;
  const auto theta = x.segment(L.theta, 2 * n_);
  s.chi = x(L.chi);
  s.u = baseline_control(theta, s.phi);
  s.varphi = varphi_bank_.output(
      Eigen::Map<const MatrixXd>(x.data() + L.varphi, L.rm_order, 2 * n_));
  s.filtered_control = (rm_filter_.c * x.segment(L.mu, L.rm_order))(0);
  const BaselineError err = baseline_estimation_error(e, theta, s.chi, s.varphi,
                                                      s.filtered_control);
  s.eps = err.eps;
  s.mu = err.mu;
  s.m_norm = config_.normalized
                 ? std::sqrt(1.0 + s.varphi.squaredNorm() + s.mu * s.mu)
                 : 1.0;
  return s;
}

void BaselineController::derivative(const Eigen::Ref<const VectorXd>& x,
                                    const BaselineSignals& s, double y,
                                    Eigen::Ref<VectorXd> dx) const {
  const BaselineLayout& L = layout_;
  const Index f = L.filter_order;
  const Index h = L.rm_order;
  if (f > 0) {
    dx.segment(L.phi1, f).noalias() = omega_filter_.a * x.segment(L.phi1, f);
    dx(L.phi1 + f - 1) += s.u;
    dx.segment(L.phi2, f).noalias() = omega_filter_.a * x.segment(L.phi2, f);
    dx(L.phi2 + f - 1) += y;
  }
  const Eigen::Map<const MatrixXd> vs(x.data() + L.varphi, h, 2 * n_);
  Eigen::Map<MatrixXd> dvs(dx.data() + L.varphi, h, 2 * n_);
  varphi_bank_.derivative(vs, s.phi, dvs);

  dx.segment(L.mu, h).noalias() = rm_filter_.a * x.segment(L.mu, h);
  dx(L.mu + h - 1) += s.u;

  if (frozen_) {
    dx.segment(L.theta, 2 * n_).setZero();
    dx(L.chi) = 0.0;
    return;
  }
  const BaselineRates rates = baseline_update(s.eps, s.varphi, s.mu, config_.gamma_matrix,
                                              config_.gamma, config_.sign_kp, config_.normalized);
  dx.segment(L.theta, 2 * n_) = rates.dtheta;
  dx(L.chi) = rates.dchi;
}

}  // namespace mrac
