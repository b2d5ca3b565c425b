#include "mrac/controller.hpp"

#include <cmath>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

double sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void require_design(const Polynomial& p, int degree, const char* name) {
  if (p.degree() != degree) {
    throw InvalidArgument(std::string(name) + " must have degree " + std::to_string(degree) +
                          ", got " + std::to_string(p.degree()));
  }
  if (!p.is_monic(1e-12)) {
    throw InvalidArgument(std::string(name) + " must be monic");
  }
  if (degree > 0 && !is_hurwitz(p)) {
    throw InvalidArgument(std::string(name) + " is not Hurwitz: " + p.to_string());
  }
}

// RK4 over one sub-vector with a frozen linear right-hand side.
template <class F>
void advance_segment(Eigen::Ref<VectorXd> seg, double dt, F&& rhs) {
  const VectorXd start = seg;
  seg = rk4_step([&](double, const VectorXd& v) -> VectorXd { return rhs(v); }, 0.0, start, dt);
}

}  // namespace

MracStructure MracStructure::make(int n, int m, Polynomial omega, Polynomial rm,
                                  Polynomial h_den) {
  if (n < 1 || m < 0 || m >= n) {
    throw InvalidArgument("controller structure needs n >= 1 and 0 <= m < n");
  }
  MracStructure s;
  s.n = n;
  s.m = m;
  s.n_star = n - m;
  require_design(omega, n - 1, "Omega");
  require_design(rm, s.n_star, "Rm");
  require_design(h_den, s.n_star, "H denominator");
  s.omega = std::move(omega);
  s.rm = std::move(rm);
  s.h_den = std::move(h_den);
  return s;
}

VectorXd assemble_phi(const Eigen::Ref<const VectorXd>& phi1,
                      const Eigen::Ref<const VectorXd>& phi2, double y, double r) {
  VectorXd phi(phi1.size() + phi2.size() + 2);
  phi << phi1, phi2, y, r;
  return phi;
}

double control_input(const Eigen::Ref<const VectorXd>& theta_full,
                     const Eigen::Ref<const VectorXd>& phi, double sigma) {
  const Index k = phi.size();
  if (theta_full.size() != 2 * k + 2) {
    throw InvalidArgument("control_input: Theta has length " + std::to_string(theta_full.size()) +
                          ", expected " + std::to_string(2 * k + 2));
  }
  const double rho = theta_full(2 * k);
  const double divisor = 1.0 + sigma * rho;
  if (std::abs(divisor) < kHardSingularity) {
    std::ostringstream os;
    os << "control law divisor 1 + sigma*rho = " << divisor << " (sigma=" << sigma
       << ", rho=" << rho << ")";
    throw ContractViolation(os.str());
  }
  const double num = theta_full.head(k).dot(phi) + sigma * theta_full.segment(k, k).dot(phi);
  return num / divisor;
}

VectorXd build_omega(const Eigen::Ref<const VectorXd>& phi, double sigma, double u) {
  VectorXd w(2 * phi.size() + 1);
  w << phi, sigma * phi, -sigma * u;
  return w;
}

double estimation_error(double ebar, double eta, double sigma, double lambda) {
  const double c = sigma + lambda;
  if (std::abs(c) < kHardSingularity) {
    std::ostringstream os;
    os << "estimation divisor sigma + lambda = " << c;
    throw ContractViolation(os.str());
  }
  return ebar + eta / c;
}

VectorXd build_Phi(const Eigen::Ref<const VectorXd>& zeta, double ebar, double sigma,
                   double lambda) {
  const double c = sigma + lambda;
  if (std::abs(c) < kHardSingularity) {
    std::ostringstream os;
    os << "regressor divisor sigma + lambda = " << c;
    throw ContractViolation(os.str());
  }
  VectorXd out(zeta.size() + 1);
  out << zeta / c, ebar / c;
  return out;
}

double tuning_gain(double rho, double lambda, double magnitude) {
  const double s = sign_of(rho) + sign_of(lambda);
  if (s >= 1.0 || (rho == 0.0 && lambda == 0.0)) {
    return magnitude;
  }
  if (s <= -1.0) {
    return -magnitude;
  }
  return 0.0;
}

SingularityMargins singularity_margins(double sigma, double rho, double lambda) {
  return {1.0 + sigma * rho, sigma + lambda};
}

MracController::MracController(MracStructure structure, AdaptationConfig adaptation,
                               double sigma_magnitude)
    : structure_(std::move(structure)),
      adaptation_(std::move(adaptation)),
      sigma_magnitude_(sigma_magnitude) {
  if (!(sigma_magnitude_ > 0.0)) {
    throw InvalidArgument("tuning gain magnitude must be positive");
  }
  const Index n = structure_.n;
  const ThetaLayout tl{n};
  if (adaptation_.theta0.size() != tl.size()) {
    throw InvalidArgument("Theta0 has length " + std::to_string(adaptation_.theta0.size()) +
                          ", expected 4n+2 = " + std::to_string(tl.size()));
  }
  adaptation_.validate();

  omega_filter_ = realize_ccf(RationalTF{Polynomial{1.0}, structure_.omega, 1.0});
  ebar_filter_ = realize_ccf(RationalTF{structure_.rm, structure_.h_den, 1.0});
  h_filter_ = realize_ccf(RationalTF{Polynomial{1.0}, structure_.h_den, 1.0});
  zeta_bank_ = VectorFilter(h_filter_, tl.omega_size());

  ControllerLayout& L = layout_;
  L.filter_order = n - 1;
  L.h_order = structure_.n_star;
  L.params = tl.size();
  Index off = 0;
  L.phi1 = off;
  off += L.filter_order;
  L.phi2 = off;
  off += L.filter_order;
  L.ebar = off;
  off += L.h_order;
  L.zeta = off;
  off += zeta_bank_.state_size();
  L.eta = off;
  off += L.h_order;
  L.theta = off;
  off += L.params;
  L.upsilon = off;
  off += L.params * L.params;
  L.size = off;
}

ControllerState MracController::initial_state() const {
  ControllerState st;
  st.x = VectorXd::Zero(layout_.size);
  theta(st.x) = adaptation_.theta0;
  upsilon(st.x) = adaptation_.upsilon0;
  st.sigma = select_sigma(st.x);
  return st;
}

double MracController::select_sigma(const Eigen::Ref<const VectorXd>& x) const {
  const ThetaLayout tl{structure_.n};
  return tuning_gain(x(layout_.theta + tl.rho_index()), x(layout_.theta + tl.lambda_index()),
                     sigma_magnitude_);
}

void MracController::evaluate(const Eigen::Ref<const VectorXd>& x, double y, double r, double e,
                              double sigma, MracSignals& s) const {
  const ControllerLayout& L = layout_;
  const ThetaLayout tl{structure_.n};
  const auto th = x.segment(L.theta, L.params);
  const Eigen::Map<const MatrixXd> ups(x.data() + L.upsilon, L.params, L.params);

  s.sigma = sigma;
  s.rho = th(tl.rho_index());
  s.lambda = th(tl.lambda_index());
  s.margins = singularity_margins(sigma, s.rho, s.lambda);

  s.phi1 = x.segment(L.phi1, L.filter_order);
  s.phi2 = x.segment(L.phi2, L.filter_order);
  s.phi = assemble_phi(s.phi1, s.phi2, y, r);
  s.u = control_input(th, s.phi, sigma);
  s.omega = build_omega(s.phi, sigma, s.u);

  const Eigen::Map<const MatrixXd> zstates(x.data() + L.zeta, L.h_order, tl.omega_size());
  s.zeta = zeta_bank_.output(zstates);
  s.filtered_bar_omega = (h_filter_.c * x.segment(L.eta, L.h_order))(0);
  s.eta = th.head(tl.bar_size()).dot(s.zeta) - s.filtered_bar_omega;
  s.ebar = (ebar_filter_.c * x.segment(L.ebar, L.h_order))(0) + ebar_filter_.d(0, 0) * e;

  s.eps_bar = estimation_error(s.ebar, s.eta, sigma, s.lambda);
  s.phi_reg = build_Phi(s.zeta, s.ebar, sigma, s.lambda);
  s.m_norm = normalization(s.phi_reg, ups, adaptation_.beta1, adaptation_.beta2);
}

MracSignals MracController::evaluate(const Eigen::Ref<const VectorXd>& x, double y, double r,
                                     double e, double sigma) const {
  MracSignals s;
  evaluate(x, y, r, e, sigma, s);
  return s;
}

void MracController::derivative(const Eigen::Ref<const VectorXd>& x, const MracSignals& s,
                                double y, double e, Eigen::Ref<VectorXd> dx) const {
  const ControllerLayout& L = layout_;
  const ThetaLayout tl{structure_.n};
  const Index f = L.filter_order;
  const Index h = L.h_order;

  if (f > 0) {
    dx.segment(L.phi1, f).noalias() = omega_filter_.a * x.segment(L.phi1, f);
    dx(L.phi1 + f - 1) += s.u;
    dx.segment(L.phi2, f).noalias() = omega_filter_.a * x.segment(L.phi2, f);
    dx(L.phi2 + f - 1) += y;
  }

  dx.segment(L.ebar, h).noalias() = ebar_filter_.a * x.segment(L.ebar, h);
  dx(L.ebar + h - 1) += e;

  const Eigen::Map<const MatrixXd> zstates(x.data() + L.zeta, h, tl.omega_size());
  Eigen::Map<MatrixXd> dz(dx.data() + L.zeta, h, tl.omega_size());
  zeta_bank_.derivative(zstates, s.omega, dz);

  const double bar_omega = x.segment(L.theta, tl.bar_size()).dot(s.omega);
  dx.segment(L.eta, h).noalias() = h_filter_.a * x.segment(L.eta, h);
  dx(L.eta + h - 1) += bar_omega;

  const Eigen::Map<const MatrixXd> ups(x.data() + L.upsilon, L.params, L.params);
  Eigen::Map<MatrixXd> dups(dx.data() + L.upsilon, L.params, L.params);
  adaptation_derivatives_into(ups, s.phi_reg, s.eps_bar, adaptation_.beta1, adaptation_.beta2,
                              dx.segment(L.theta, L.params), dups);
}

void MracController::symmetrize(VectorXd& x) const {
  auto u = upsilon(x);
  const MatrixXd sym = 0.5 * (u + u.transpose());
  u = sym;
}

RegressorOutputs update_regressor_filters(const MracController& ctrl, ControllerState& state,
                                          double u, double y, double dt) {
  const ControllerLayout& L = ctrl.layout();
  const Index f = L.filter_order;
  const MatrixXd& a = ctrl.omega_filter().a;
  if (f > 0) {
    advance_segment(state.x.segment(L.phi1, f), dt, [&](const VectorXd& v) -> VectorXd {
      VectorXd d = a * v;
      d(f - 1) += u;
      return d;
    });
    advance_segment(state.x.segment(L.phi2, f), dt, [&](const VectorXd& v) -> VectorXd {
      VectorXd d = a * v;
      d(f - 1) += y;
      return d;
    });
  }
  state.last_u = u;
  return {state.x.segment(L.phi1, f), state.x.segment(L.phi2, f)};
}

double tracking_error_bar(const MracController& ctrl, ControllerState& state, double e,
                          double dt) {
  const ControllerLayout& L = ctrl.layout();
  const StateSpaceBlock& blk = ctrl.ebar_filter();
  const Index h = L.h_order;
  advance_segment(state.x.segment(L.ebar, h), dt, [&](const VectorXd& v) -> VectorXd {
    VectorXd d = blk.a * v;
    d(h - 1) += e;
    return d;
  });
  return (blk.c * state.x.segment(L.ebar, h))(0) + blk.d(0, 0) * e;
}

AuxSignals aux_signals(const MracController& ctrl, ControllerState& state,
                       const Eigen::Ref<const VectorXd>& omega,
                       const Eigen::Ref<const VectorXd>& theta_full, double dt) {
  const ControllerLayout& L = ctrl.layout();
  const ThetaLayout tl = ctrl.theta_layout();
  if (omega.size() != tl.omega_size() || theta_full.size() != tl.size()) {
    throw InvalidArgument("aux_signals: omega/Theta dimensions do not match 4n+1/4n+2");
  }
  const Index h = L.h_order;
  const Index w = tl.omega_size();
  const VectorFilter& bank = ctrl.zeta_bank();
  const VectorXd held = omega;
  advance_segment(state.x.segment(L.zeta, h * w), dt, [&](const VectorXd& v) -> VectorXd {
    VectorXd d(h * w);
    Eigen::Map<MatrixXd> dm(d.data(), h, w);
    bank.derivative(Eigen::Map<const MatrixXd>(v.data(), h, w), held, dm);
    return d;
  });
  const double bar_omega = theta_full.head(tl.bar_size()).dot(omega);
  const MatrixXd& a = ctrl.h_filter().a;
  advance_segment(state.x.segment(L.eta, h), dt, [&](const VectorXd& v) -> VectorXd {
    VectorXd d = a * v;
    d(h - 1) += bar_omega;
    return d;
  });
  AuxSignals out;
  out.zeta = bank.output(Eigen::Map<const MatrixXd>(state.x.data() + L.zeta, h, w));
  const double filtered = (ctrl.h_filter().c * state.x.segment(L.eta, h))(0);
  out.eta = theta_full.head(tl.bar_size()).dot(out.zeta) - filtered;
  return out;
}

}  // namespace mrac
