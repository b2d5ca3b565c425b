#include <gtest/gtest.h>

#include <cmath>

#include "mrac/controller.hpp"
#include "mrac/errors.hpp"
#include "mrac/matching.hpp"
#include "mrac/plant.hpp"
#include "mrac_app/suites.hpp"

using namespace mrac;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

MracController boeing_controller() {
  const MracStructure s = MracStructure::make(4, 2, boeing_omega(), boeing_reference().rm,
                                              boeing_reference().rm);
  AdaptationConfig a = AdaptationConfig::isotropic(18, 1e3);
  a.theta0 = VectorXd::Zero(18);
  return MracController(s, a);
}

MracController small_controller(Polynomial h_den) {
  const MracStructure s =
      MracStructure::make(2, 1, Polynomial{1.0, 1.0}, Polynomial{4.0, 1.0}, std::move(h_den));
  AdaptationConfig a = AdaptationConfig::isotropic(10, 1.0);
  a.theta0 = VectorXd::Zero(10);
  return MracController(s, a);
}

}  // namespace

TEST(TuningGain, Branches) {
  EXPECT_EQ(tuning_gain(0.5, 10.0), 1.0);
  EXPECT_EQ(tuning_gain(0.0, 0.0), 1.0);
  EXPECT_EQ(tuning_gain(0.5, -1.0), 0.0);
  EXPECT_EQ(tuning_gain(-0.023, -43.478), -1.0);
  EXPECT_EQ(tuning_gain(0.0, 3.0), 1.0);
  EXPECT_EQ(tuning_gain(-2.0, 0.0), -1.0);
  EXPECT_EQ(tuning_gain(0.5, 10.0, 2.5), 2.5);
}

TEST(SingularityMargins, Examples) {
  auto m = singularity_margins(1.0, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(m.control, 3.0);
  EXPECT_DOUBLE_EQ(m.estimation, 4.0);
  m = singularity_margins(0.0, -1.0, 0.5);
  EXPECT_DOUBLE_EQ(m.control, 1.0);
  EXPECT_DOUBLE_EQ(m.estimation, 0.5);
  m = singularity_margins(-1.0, -0.023, -43.478);
  EXPECT_DOUBLE_EQ(m.control, 1.023);
  EXPECT_DOUBLE_EQ(m.estimation, -44.478);
}

TEST(TuningGain, MarginsNeverShrinkBelowOne) {
  // Whatever (rho, lambda) the estimator produces, the selected sigma keeps
  // 1 + sigma rho >= 1 and sigma + lambda away from zero with lambda's sign.
  const double values[] = {-5.0, -1.0, -0.023, 0.0, 0.3, 1.0, 7.0};
  for (double rho : values) {
    for (double lambda : values) {
      const double sigma = tuning_gain(rho, lambda);
      const SingularityMargins m = singularity_margins(sigma, rho, lambda);
      EXPECT_GE(m.control, 1.0) << rho << " " << lambda;
      EXPECT_NE(m.estimation, 0.0) << rho << " " << lambda;
      if (lambda != 0.0) {
        EXPECT_EQ(std::signbit(m.estimation), std::signbit(lambda)) << rho << " " << lambda;
      } else {
        EXPECT_EQ(std::signbit(m.estimation), std::signbit(sigma)) << rho << " " << lambda;
      }
    }
  }
}

TEST(AssemblePhi, Ordering) {
  EXPECT_EQ(assemble_phi(vec({1.0}), vec({2.0}), 3.0, 4.0), vec({1.0, 2.0, 3.0, 4.0}));
  EXPECT_TRUE(assemble_phi(VectorXd::Zero(3), VectorXd::Zero(3), 0.0, 0.0).isZero());
  EXPECT_EQ(assemble_phi(VectorXd::Zero(3), VectorXd::Zero(3), 0.0, 0.0).size(), 8);
}

TEST(ControlInput, Examples) {
  // n = 1: theta = [1, 1], theta_p = [2, 2], rho = 1, phi = [1, 1].
  const VectorXd theta = vec({1.0, 1.0, 2.0, 2.0, 1.0, 0.0});
  const VectorXd phi = vec({1.0, 1.0});
  EXPECT_DOUBLE_EQ(control_input(theta, phi, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(control_input(theta, phi, 0.0), 2.0);
  const VectorXd boeing_like = vec({1.0, 1.0, 2.0, 2.0, -0.023, 0.0});
  EXPECT_DOUBLE_EQ(control_input(boeing_like, phi, -1.0), (2.0 - 4.0) / 1.023);
}

TEST(ControlInput, SingularDivisorThrows) {
  const VectorXd theta = vec({1.0, 1.0, 2.0, 2.0, 1.0, 0.0});
  EXPECT_THROW(control_input(theta, vec({1.0, 1.0}), -1.0), ContractViolation);
}

TEST(BuildOmega, Examples) {
  const VectorXd phi = vec({1.0, 1.0});
  EXPECT_EQ(build_omega(phi, 1.0, 2.0), vec({1.0, 1.0, 1.0, 1.0, -2.0}));
  EXPECT_EQ(build_omega(phi, -1.0, 2.0), vec({1.0, 1.0, -1.0, -1.0, 2.0}));
  const VectorXd zero_sigma = build_omega(phi, 0.0, 5.0);
  EXPECT_EQ(zero_sigma.head(2), phi);
  EXPECT_TRUE(zero_sigma.tail(3).isZero());
}

TEST(EstimationError, Examples) {
  EXPECT_DOUBLE_EQ(estimation_error(0.7, 0.0, 1.0, 3.0), 0.7);
  EXPECT_DOUBLE_EQ(estimation_error(1.0, 2.0, 1.0, 1.0), 2.0);
}

TEST(BuildPhi, Examples) {
  EXPECT_EQ(build_Phi(vec({2.0, 4.0}), 1.0, 1.0, 1.0), vec({1.0, 2.0, 0.5}));
  EXPECT_TRUE(build_Phi(VectorXd::Zero(2), 0.0, 1.0, 1.0).isZero());
}

TEST(MracStructure, ValidatesDesignPolynomials) {
  EXPECT_THROW(MracStructure::make(2, 1, Polynomial{-1.0, 1.0}, Polynomial{4.0, 1.0},
                                   Polynomial{4.0, 1.0}),
               InvalidArgument);
  EXPECT_THROW(MracStructure::make(3, 1, Polynomial{1.0, 2.0, 1.0}, Polynomial{4.0, 1.0},
                                   Polynomial{4.0, 1.0}),
               InvalidArgument);
  EXPECT_NO_THROW(MracStructure::make(3, 1, Polynomial{1.0, 2.0, 1.0}, Polynomial{4.0, 4.0, 1.0},
                                      Polynomial{4.0, 4.0, 1.0}));
}

TEST(ThetaLayout, BoeingSizes) {
  const MracController c = boeing_controller();
  const ThetaLayout t = c.theta_layout();
  EXPECT_EQ(t.size(), 18);
  EXPECT_EQ(t.rho_index(), 16);
  EXPECT_EQ(t.lambda_index(), 17);
  EXPECT_EQ(t.omega_size(), 17);
}

TEST(RegressorFilters, ZeroInputStaysZero) {
  const MracController c = boeing_controller();
  ControllerState st = c.initial_state();
  for (int i = 0; i < 100; ++i) {
    const RegressorOutputs r = update_regressor_filters(c, st, 0.0, 0.0, 1e-3);
    ASSERT_TRUE(r.phi1.isZero());
    ASSERT_TRUE(r.phi2.isZero());
  }
}

TEST(RegressorFilters, DcGainOfFirstOrderFilter) {
  const MracController c = small_controller(Polynomial{4.0, 1.0});
  ControllerState st = c.initial_state();
  RegressorOutputs r;
  for (int i = 0; i < 20000; ++i) r = update_regressor_filters(c, st, 1.0, 0.0, 1e-3);
  EXPECT_NEAR(r.phi1(0), 1.0, 1e-8);
  EXPECT_NEAR(r.phi2(0), 0.0, 1e-15);
}

TEST(TrackingErrorBar, EqualsErrorWhenFilterIsReferenceModel) {
  const MracController c = boeing_controller();
  ControllerState st = c.initial_state();
  for (int i = 1; i <= 5000; ++i) {
    const double e = std::sin(1e-3 * i) + 0.3 * std::cos(2.7e-3 * i);
    ASSERT_NEAR(tracking_error_bar(c, st, e, 1e-3), e, 1e-12) << "step " << i;
  }
}

TEST(TrackingErrorBar, ZeroErrorStaysZero) {
  const MracController c = small_controller(Polynomial{2.0, 1.0});
  ControllerState st = c.initial_state();
  for (int i = 0; i < 100; ++i) ASSERT_EQ(tracking_error_bar(c, st, 0.0, 1e-3), 0.0);
}

TEST(AuxSignals, ConstantParametersGiveZeroEta) {
  const MracController c = boeing_controller();
  ControllerState st = c.initial_state();
  VectorXd theta(18);
  for (Index i = 0; i < 18; ++i) theta(i) = 0.5 * static_cast<double>(i) - 3.0;
  double worst = 0.0;
  for (int k = 1; k <= 3000; ++k) {
    const double t = 1e-3 * k;
    VectorXd omega(17);
    for (Index i = 0; i < 17; ++i) omega(i) = std::sin((1.0 + 0.1 * i) * t);
    const AuxSignals a = aux_signals(c, st, omega, theta, 1e-3);
    worst = std::max(worst, std::abs(a.eta) / (1.0 + a.zeta.norm()));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(AuxSignals, ZeroOmegaGivesZeroOutputs) {
  const MracController c = boeing_controller();
  ControllerState st = c.initial_state();
  const VectorXd theta = VectorXd::Ones(18);
  for (int k = 0; k < 50; ++k) {
    const AuxSignals a = aux_signals(c, st, VectorXd::Zero(17), theta, 1e-3);
    ASSERT_TRUE(a.zeta.isZero());
    ASSERT_EQ(a.eta, 0.0);
  }
}

TEST(SwappingIdentity, HoldsForRandomFilters) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_LE(app::swapping_residual(seed, 1e-3, 5.0), 1e-8) << "seed " << seed;
  }
}
