#pragma once

#include <Eigen/Dense>

#include "mrac/lti.hpp"
#include "mrac/polynomial.hpp"

namespace mrac {

/// Traditional gradient MRAC that needs sign(kp) up front.
struct BaselineConfig {
  MatrixXd gamma_matrix;  // Gamma > 0, 2n x 2n
  double gamma = 10.0;    // kp-estimate adaptation gain
  int sign_kp = 1;        // +1 or -1, supplied a priori
  bool normalized = false;
  VectorXd theta0;        // length 2n
  double chi0 = 1.0;

  void validate(Index n) const;
};

inline constexpr double kDefaultBaselineGamma = 10.0;

/// u = th' phi.
double baseline_control(const Eigen::Ref<const VectorXd>& theta,
                        const Eigen::Ref<const VectorXd>& phi);

struct BaselineError {
  double eps = 0.0;
  double mu = 0.0;
};

/// eps = e + chi mu with mu = th' varphi - (1/Rm)[th' phi].
/// `filtered_control` is the (1/Rm)[th' phi] filter output and `varphi`
/// the filtered regressor (1/Rm)[phi].
BaselineError baseline_estimation_error(double e, const Eigen::Ref<const VectorXd>& theta,
                                        double chi, const Eigen::Ref<const VectorXd>& varphi,
                                        double filtered_control);

struct BaselineRates {
  VectorXd dtheta;
  double dchi = 0.0;
};

/// dth = -sign_kp Gamma eps varphi, dchi = -gamma eps mu, optionally divided
/// by m^2 = 1 + varphi'varphi + mu^2.
BaselineRates baseline_update(double eps, const Eigen::Ref<const VectorXd>& varphi, double mu,
                              const Eigen::Ref<const MatrixXd>& gamma_matrix, double gamma,
                              int sign_kp, bool normalized = false);

struct BaselineLayout {
  Index phi1 = 0, phi2 = 0, varphi = 0, mu = 0, theta = 0, chi = 0, size = 0;
  Index filter_order = 0;
  Index rm_order = 0;
};

struct BaselineSignals {
  VectorXd phi, varphi;
  double u = 0.0;
  double eps = 0.0;
  double mu = 0.0;
  double filtered_control = 0.0;
  double chi = 0.0;
  double m_norm = 1.0;
};

class BaselineController {
 public:
  BaselineController(int n, int m, Polynomial omega, Polynomial rm, BaselineConfig config);

  const BaselineLayout& layout() const noexcept { return layout_; }
  const BaselineConfig& config() const noexcept { return config_; }
  Index state_size() const noexcept { return layout_.size; }
  int n() const noexcept { return n_; }

  VectorXd initial_state() const;
  BaselineSignals evaluate(const Eigen::Ref<const VectorXd>& x, double y, double r,
                           double e) const;
  void derivative(const Eigen::Ref<const VectorXd>& x, const BaselineSignals& s, double y,
                  Eigen::Ref<VectorXd> dx) const;
  /// Freeze theta/chi (certainty-equivalence runs).
  void set_frozen(bool frozen) noexcept { frozen_ = frozen; }
  bool frozen() const noexcept { return frozen_; }

 private:
  int n_;
  BaselineConfig config_;
  BaselineLayout layout_;
  StateSpaceBlock omega_filter_;
  StateSpaceBlock rm_filter_;  // 1/Rm
  VectorFilter varphi_bank_;
  bool frozen_ = false;
};

}  // namespace mrac
