#include "mrac/harness.hpp"

#include <cmath>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

bool needs_matching(const ScenarioConfig& cfg) {
  if (cfg.diagnostics) {
    return true;
  }
  if (cfg.controller == ControllerKind::proposed) {
    return cfg.adaptation.theta0_mode == Theta0Mode::multipliers;
  }
  return cfg.baseline.theta0_mode == Theta0Mode::multipliers;
}

BaselineConfig make_baseline_config(const ScenarioConfig& cfg,
                                    const std::optional<MatchedGains>& gains) {
  const Index n = cfg.plant.n();
  const BaselineSpec& b = cfg.baseline;
  BaselineConfig c;
  c.gamma_matrix = b.gamma_scale * MatrixXd::Identity(2 * n, 2 * n);
  c.gamma = b.gamma;
  c.sign_kp = b.sign_kp.value_or(sign_of(cfg.plant.kp));
  c.normalized = b.normalized;
  if (b.theta0_mode == Theta0Mode::multipliers) {
    if (!gains) {
      throw InvalidArgument("baseline multiplier mode needs the matched gains");
    }
    c.theta0 = b.theta_multiplier * gains->theta();
    c.chi0 = b.chi_multiplier * cfg.plant.kp;
  } else {
    if (static_cast<Index>(b.theta0_values.size()) != 2 * n) {
      throw InvalidArgument("baseline theta0 must list 2n = " + std::to_string(2 * n) +
                            " values, got " + std::to_string(b.theta0_values.size()));
    }
    c.theta0 = to_vector(b.theta0_values);
    c.chi0 = b.chi0;
  }
  return c;
}

std::variant<MracController, BaselineController> make_controller(
    const ScenarioConfig& cfg, const std::optional<MatchedGains>& gains) {
  const int n = cfg.plant.n();
  const int m = cfg.plant.m();
  if (cfg.controller == ControllerKind::proposed) {
    MracStructure st = MracStructure::make(n, m, cfg.resolved_omega(), cfg.reference.rm,
                                           cfg.resolved_h_den());
    AdaptationConfig ad = AdaptationConfig::isotropic(ThetaLayout{n}.size(),
                                                      cfg.adaptation.upsilon0_scale,
                                                      cfg.adaptation.beta1, cfg.adaptation.beta2);
    ad.theta0 = resolve_theta0(cfg, gains);
    return MracController(std::move(st), std::move(ad), cfg.adaptation.sigma_magnitude);
  }
  BaselineController bc(n, m, cfg.resolved_omega(), cfg.reference.rm,
                        make_baseline_config(cfg, gains));
  bc.set_frozen(cfg.baseline.frozen);
  return bc;
}

}  // namespace

void ScenarioConfig::validate() const {
  plant.validate();
  reference.validate();
  if (reference.rm.degree() != plant.relative_degree()) {
    throw InvalidArgument("Rm must have degree n* = " + std::to_string(plant.relative_degree()) +
                          ", got " + std::to_string(reference.rm.degree()));
  }
  if (!(sim.dt > 0.0) || !std::isfinite(sim.dt)) {
    throw InvalidArgument("dt must be positive");
  }
  if (!(sim.t_final > sim.dt) || !std::isfinite(sim.t_final)) {
    throw InvalidArgument("t_final must exceed dt");
  }
  if (sim.record_stride < 1) {
    throw InvalidArgument("record_stride must be >= 1");
  }
  if (!(adaptation.upsilon0_scale > 0.0)) {
    throw InvalidArgument("upsilon0_scale must be positive");
  }
  if (!(adaptation.beta1 > 0.0) || !(adaptation.beta2 > 0.0)) {
    throw InvalidArgument("beta1 and beta2 must be positive");
  }
  if (!(adaptation.sigma_magnitude > 0.0)) {
    throw InvalidArgument("sigma magnitude must be positive");
  }
  if (baseline.sign_kp && *baseline.sign_kp != 1 && *baseline.sign_kp != -1) {
    throw InvalidArgument("baseline sign_kp must be +1 or -1");
  }
  // Degree and Hurwitz checks of the design polynomials.
  (void)MracStructure::make(plant.n(), plant.m(), resolved_omega(), reference.rm,
                            resolved_h_den());
}

Polynomial ScenarioConfig::resolved_omega() const {
  return structure.omega ? *structure.omega : default_omega(plant.n());
}

Polynomial ScenarioConfig::resolved_h_den() const {
  return structure.h_den ? *structure.h_den : reference.rm;
}

MatchingProblem ScenarioConfig::matching_problem() const {
  return MatchingProblem{plant.p, plant.z, plant.kp, resolved_omega(), reference.rm};
}

ScenarioConfig boeing_scenario(BoeingCase which) {
  ScenarioConfig cfg;
  cfg.plant = boeing_model();
  cfg.reference = boeing_reference();
  cfg.structure.omega = boeing_omega();
  cfg.structure.h_den = Polynomial{108.0, 21.0, 1.0};
  cfg.controller = ControllerKind::proposed;
  cfg.adaptation.upsilon0_scale = kLargePriorScale;
  cfg.adaptation.theta0_mode = Theta0Mode::multipliers;
  ProposedMultipliers& k = cfg.adaptation.multipliers;
  if (which == BoeingCase::i) {
    cfg.name = "boeing-case-i";
    k = {1.2, 1.2, 1.2, 1.2, 0.9, 1.2, 0.8};
  } else {
    cfg.name = "boeing-case-ii";
    k = {0.8, 0.8, 0.8, -0.3, -0.5, -0.5, -0.5};
  }
  return cfg;
}

ScenarioConfig boeing_baseline_scenario() {
  ScenarioConfig cfg;
  cfg.name = "boeing-baseline";
  cfg.plant = boeing_model();
  cfg.reference = boeing_reference();
  cfg.structure.omega = boeing_omega();
  cfg.controller = ControllerKind::baseline;
  cfg.baseline.sign_kp = -1;
  cfg.baseline.theta0_mode = Theta0Mode::multipliers;
  cfg.baseline.theta_multiplier = 1.2;
  cfg.baseline.chi_multiplier = 1.2;
  return cfg;
}

VectorXd resolve_theta0(const ScenarioConfig& cfg, const std::optional<MatchedGains>& gains) {
  const Index n = cfg.plant.n();
  const ThetaLayout tl{n};
  if (cfg.adaptation.theta0_mode == Theta0Mode::explicit_values) {
    if (static_cast<Index>(cfg.adaptation.theta0_values.size()) != tl.size()) {
      throw InvalidArgument("Theta0 must list 4n+2 = " + std::to_string(tl.size()) +
                            " values, got " + std::to_string(cfg.adaptation.theta0_values.size()));
    }
    return to_vector(cfg.adaptation.theta0_values);
  }
  if (!gains) {
    throw InvalidArgument("Theta0 multiplier mode needs the matched gains");
  }
  const ProposedMultipliers& k = cfg.adaptation.multipliers;
  VectorXd t0(tl.size());
  t0 << k.theta1 * gains->theta1, k.theta2 * gains->theta2, k.theta3 * gains->theta3,
      k.theta4 * gains->theta4, k.theta_p * gains->theta_p, k.rho * gains->rho_star,
      k.lambda * gains->lambda_star;
  return t0;
}

ClosedLoop::ClosedLoop(const ScenarioConfig& cfg)
    : cfg_(cfg),
      plant_((cfg.validate(), cfg.plant.realize())),
      reference_(cfg.reference.realize()),
      gains_(needs_matching(cfg) ? std::optional<MatchedGains>(solve_matching(cfg.matching_problem()))
                                 : std::nullopt),
      ctrl_(make_controller(cfg, gains_)) {
  StateLayout& L = layout_;
  L.plant_size = plant_.states();
  L.reference_size = reference_.states();
  L.controller_size = std::visit([](const auto& c) { return c.state_size(); }, ctrl_);
  L.plant = 0;
  L.reference = L.plant_size;
  L.controller = L.reference + L.reference_size;
  L.size = L.controller + L.controller_size;
}

VectorXd ClosedLoop::initial_state() const {
  VectorXd x = VectorXd::Zero(layout_.size);
  if (is_proposed()) {
    x.segment(layout_.controller, layout_.controller_size) = proposed().initial_state().x;
  } else {
    x.segment(layout_.controller, layout_.controller_size) = baseline().initial_state();
  }
  return x;
}

double ClosedLoop::select_sigma(const VectorXd& x) const {
  if (!is_proposed()) {
    return 0.0;
  }
  return proposed().select_sigma(controller_state(x));
}

double ClosedLoop::output(const VectorXd& x) const {
  return (plant_.c * x.segment(layout_.plant, layout_.plant_size))(0);
}

double ClosedLoop::reference_output(const VectorXd& x) const {
  return (reference_.c * x.segment(layout_.reference, layout_.reference_size))(0);
}

void ClosedLoop::derivative(double t, const VectorXd& x, double sigma, VectorXd& dx) const {
  const StateLayout& L = layout_;
  dx.resize(L.size);
  const double y = output(x);
  const double ys = reference_output(x);
  const double r = cfg_.reference.r(t);
  const double e = y - ys;
  const auto xc = controller_state(x);
  auto dxc = dx.segment(L.controller, L.controller_size);

  double u = 0.0;
  if (is_proposed()) {
    const MracSignals s = proposed().evaluate(xc, y, r, e, sigma);
    u = s.u;
    proposed().derivative(xc, s, y, e, dxc);
  } else {
    const BaselineSignals s = baseline().evaluate(xc, y, r, e);
    u = s.u;
    baseline().derivative(xc, s, y, dxc);
  }

  auto xp = x.segment(L.plant, L.plant_size);
  auto dxp = dx.segment(L.plant, L.plant_size);
  dxp.noalias() = plant_.a * xp;
  dxp += plant_.b.col(0) * u;
  auto xr = x.segment(L.reference, L.reference_size);
  auto dxr = dx.segment(L.reference, L.reference_size);
  dxr.noalias() = reference_.a * xr;
  dxr += reference_.b.col(0) * r;
}

VectorXd ClosedLoop::derivative(double t, const VectorXd& x, double sigma) const {
  VectorXd dx(layout_.size);
  derivative(t, x, sigma, dx);
  return dx;
}

void ClosedLoop::post_step(VectorXd& x) const {
  if (!is_proposed()) {
    return;
  }
  VectorXd xc = controller_state(x);
  proposed().symmetrize(xc);
  x.segment(layout_.controller, layout_.controller_size) = xc;
}

ClosedLoop assemble_closed_loop(const ScenarioConfig& cfg) { return ClosedLoop(cfg); }

namespace {

// Theta-star quantities evaluated once per step on the proposed controller.
class Diagnostics {
 public:
  Diagnostics(const MracController& ctrl, const VectorXd& theta_star)
      : ctrl_(ctrl), theta_star_(theta_star), identity_(ctrl.adaptation(), theta_star) {}

  double initial_error_norm() const { return identity_.initial_error_norm(); }

  // Returns false when Upsilon is not positive definite.
  bool update(const VectorXd& xc, const MracSignals& s, StepStatistics& st, double& v_out) {
    const auto th = ctrl_.theta(xc);
    const auto ups = ctrl_.upsilon(xc);
    const VectorXd err = th - theta_star_;

    const double reg = std::abs(s.eps_bar - err.dot(s.phi_reg)) / (1.0 + std::abs(s.eps_bar));
    st.max_regression_residual = std::max(st.max_regression_residual, reg);
    st.max_solution_residual = std::max(st.max_solution_residual, identity_.residual(th, ups));

    llt_.compute(ups);
    if (llt_.info() != Eigen::Success) {
      return false;
    }
    const double v = llt_.matrixL().solve(err).squaredNorm();
    if (has_prev_) {
      const double inc = (v - prev_v_) / (1.0 + prev_v_);
      st.max_v_increase = std::max(st.max_v_increase, inc);
      if (inc > kVMonotonicityTol) {
        ++st.v_violations;
      }
    }
    prev_v_ = v;
    has_prev_ = true;
    v_out = v;
    return true;
  }

 private:
  const MracController& ctrl_;
  VectorXd theta_star_;
  SolutionIdentity identity_;
  Eigen::LLT<MatrixXd> llt_;
  double prev_v_ = 0.0;
  bool has_prev_ = false;
};

double min_eigenvalue(const Eigen::Ref<const MatrixXd>& m) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& cfg) {
  RunRecord rec;
  rec.config = cfg;
  const ClosedLoop loop(cfg);
  const ScenarioConfig& c = loop.config();
  const double dt = c.sim.dt;
  const long steps = std::lround(c.sim.t_final / dt);
  const long stride = c.sim.record_stride;
  if (loop.matched_gains()) {
    rec.warnings = loop.matched_gains()->warnings;
  }

  const bool proposed = loop.is_proposed();
  std::optional<Diagnostics> diag;
  if (proposed && c.diagnostics && loop.matched_gains()) {
    rec.has_theta_star = true;
    rec.theta_star = loop.matched_gains()->theta_star_full;
    diag.emplace(loop.proposed(), rec.theta_star);
    rec.initial_error_norm = diag->initial_error_norm();
  }
  rec.samples.reserve(static_cast<std::size_t>(steps / stride + 2));
  rec.theta_samples.reserve(rec.samples.capacity());

  StepStatistics& st = rec.stats;
  VectorXd x = loop.initial_state();
  VectorXd x_prev;
  double prev_sigma = std::numeric_limits<double>::quiet_NaN();
  MracSignals sig;

  auto abort_run = [&](const std::string& why, double t) {
    rec.aborted = true;
    rec.abort_reason = why;
    rec.abort_time = t;
  };

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool last = (k == steps);
    const bool record = (k % stride == 0) || last;
    try {
      if (!x.allFinite()) {
        throw NonFiniteState("non-finite state at t=" + std::to_string(t), t);
      }
      const double sigma = loop.select_sigma(x);
      if (k > 0 && sigma != prev_sigma) {
        ++st.sigma_switches;
      }
      prev_sigma = sigma;

      const double y = loop.output(x);
      const double ys = loop.reference_output(x);
      const double r = loop.reference_input(t);
      const double e = y - ys;
      const auto xc = loop.controller_state(x);

      Sample smp;
      smp.t = t;
      smp.y = y;
      smp.y_star = ys;
      smp.e = e;
      smp.sigma = sigma;
      if (proposed) {
        const MracController& ctrl = loop.proposed();
        ctrl.evaluate(xc, y, r, e, sigma, sig);
        smp.u = sig.u;
        smp.rho = sig.rho;
        smp.lambda = sig.lambda;
        smp.eps_bar = sig.eps_bar;
        smp.m_norm = sig.m_norm;
        smp.margin_u = sig.margins.control;
        smp.margin_lambda = sig.margins.estimation;
        st.min_margin_u = std::min(st.min_margin_u, sig.margins.control);
        const double abs_l = std::abs(sig.margins.estimation);
        st.min_abs_margin_lambda = std::min(st.min_abs_margin_lambda, abs_l);
        if (abs_l < kNearSingularWarning) {
          ++st.near_singular_steps;
        }
        if (diag) {
          const VectorXd xcv = xc;
          double v = 0.0;
          if (!diag->update(xcv, sig, st, v)) {
            st.covariance_collapse = true;
            throw SingularSystem("Upsilon lost positive definiteness at t=" + std::to_string(t),
                                 std::numeric_limits<double>::infinity());
          }
          smp.v = v;
        }
        if (record) {
          const double me = min_eigenvalue(ctrl.upsilon(VectorXd(xc)));
          smp.min_eig_upsilon = me;
          st.min_eig_upsilon = std::min(st.min_eig_upsilon, me);
          if (me < kCovarianceCollapseEig) {
            st.covariance_collapse = true;
          }
        }
      } else {
        const BaselineSignals bs = loop.baseline().evaluate(xc, y, r, e);
        smp.u = bs.u;
        smp.rho = bs.chi;
        smp.eps_bar = bs.eps;
        smp.m_norm = bs.m_norm;
      }
      st.max_abs_u = std::max(st.max_abs_u, std::abs(smp.u));

      if (record) {
        rec.samples.push_back(smp);
        if (proposed) {
          rec.theta_samples.emplace_back(loop.proposed().theta(VectorXd(xc)));
        } else {
          const BaselineLayout& bl = loop.baseline().layout();
          rec.theta_samples.emplace_back(xc.segment(bl.theta, bl.chi - bl.theta + 1));
        }
      }
      if (last) {
        break;
      }

      x_prev = x;
      x = rk4_step([&](double tt, const VectorXd& xx) { return loop.derivative(tt, xx, sigma); },
                   t, x, dt);
      loop.post_step(x);
      ++st.steps;

      const Index th_off = proposed ? loop.layout().controller + loop.proposed().layout().theta
                                    : loop.layout().controller + loop.baseline().layout().theta;
      const Index th_len = proposed ? loop.proposed().layout().params
                                    : 2 * loop.config().plant.n() + 1;
      st.theta_dot_sq_integral +=
          (x.segment(th_off, th_len) - x_prev.segment(th_off, th_len)).squaredNorm() / dt;
    } catch (const NonFiniteState& ex) {
      abort_run(ex.what(), t);
      break;
    } catch (const ContractViolation& ex) {
      abort_run(std::string(ex.what()) + " at t=" + std::to_string(t), t);
      break;
    } catch (const SingularSystem& ex) {
      abort_run(ex.what(), t);
      break;
    }
  }
  return rec;
}

}  // namespace mrac
