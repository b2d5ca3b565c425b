#include <gtest/gtest.h>

#include "mrac/baseline.hpp"
#include "mrac/errors.hpp"

using namespace mrac;

TEST(BaselineControl, Examples) {
  EXPECT_EQ(baseline_control(VectorXd::Zero(4), VectorXd::Ones(4)), 0.0);
  VectorXd th(4);
  th << 1, 2, 3, 4;
  EXPECT_DOUBLE_EQ(baseline_control(th, VectorXd::Ones(4)), 10.0);
}

TEST(BaselineEstimationError, Arithmetic) {
  const BaselineError r =
      baseline_estimation_error(1.0, VectorXd::Ones(1), 2.0, VectorXd::Constant(1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(r.mu, 0.5);
  EXPECT_DOUBLE_EQ(r.eps, 2.0);
}

TEST(BaselineUpdate, Examples) {
  const MatrixXd gamma = MatrixXd::Identity(4, 4);
  VectorXd varphi = VectorXd::Zero(4);
  varphi(0) = 1.0;
  BaselineRates r = baseline_update(0.0, varphi, 0.3, gamma, 10.0, -1);
  EXPECT_TRUE(r.dtheta.isZero());
  EXPECT_EQ(r.dchi, 0.0);

  r = baseline_update(1.0, varphi, 0.0, gamma, 10.0, -1);
  VectorXd expected = VectorXd::Zero(4);
  expected(0) = 1.0;
  EXPECT_EQ(r.dtheta, expected);

  r = baseline_update(1.0, varphi, 0.5, gamma, 10.0, 1);
  EXPECT_DOUBLE_EQ(r.dtheta(0), -1.0);
  EXPECT_DOUBLE_EQ(r.dchi, -5.0);
}

TEST(BaselineUpdate, NormalizedDividesByRegressorEnergy) {
  const MatrixXd gamma = MatrixXd::Identity(2, 2);
  VectorXd varphi(2);
  varphi << 1.0, 1.0;
  const BaselineRates raw = baseline_update(1.0, varphi, 1.0, gamma, 1.0, 1);
  const BaselineRates norm = baseline_update(1.0, varphi, 1.0, gamma, 1.0, 1, true);
  EXPECT_DOUBLE_EQ(norm.dtheta(0), raw.dtheta(0) / 4.0);
  EXPECT_DOUBLE_EQ(norm.dchi, raw.dchi / 4.0);
}

TEST(BaselineConfig, RejectsBadSign) {
  BaselineConfig cfg;
  cfg.gamma_matrix = MatrixXd::Identity(4, 4);
  cfg.theta0 = VectorXd::Zero(4);
  cfg.sign_kp = 0;
  EXPECT_THROW(cfg.validate(2), InvalidArgument);
  cfg.sign_kp = -1;
  EXPECT_NO_THROW(cfg.validate(2));
}
