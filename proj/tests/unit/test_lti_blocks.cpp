#include <gtest/gtest.h>

#include <cmath>

#include "mrac/errors.hpp"
#include "mrac/lti.hpp"
#include "mrac/polynomial.hpp"

using namespace mrac;

namespace {

StateSpaceBlock scalar_block(double a, double b, double c, double d, double x) {
  StateSpaceBlock blk;
  blk.a = MatrixXd::Constant(1, 1, a);
  blk.b = MatrixXd::Constant(1, 1, b);
  blk.c = MatrixXd::Constant(1, 1, c);
  blk.d = MatrixXd::Constant(1, 1, d);
  blk.x = VectorXd::Constant(1, x);
  return blk;
}

VectorXd scalar(double v) { return VectorXd::Constant(1, v); }

}  // namespace

TEST(BlockDerivative, Examples) {
  auto r = block_derivative(scalar_block(-1, 1, 1, 0, 0), scalar(1.0));
  EXPECT_DOUBLE_EQ(r.dx(0), 1.0);
  EXPECT_DOUBLE_EQ(r.y(0), 0.0);

  r = block_derivative(scalar_block(-1, 1, 1, 1, 2), scalar(3.0));
  EXPECT_DOUBLE_EQ(r.dx(0), 1.0);
  EXPECT_DOUBLE_EQ(r.y(0), 5.0);

  r = block_derivative(scalar_block(-1, 1, 1, 1, 0), scalar(0.0));
  EXPECT_DOUBLE_EQ(r.dx(0), 0.0);
  EXPECT_DOUBLE_EQ(r.y(0), 0.0);
}

TEST(BlockDerivative, RejectsMismatchedInput) {
  EXPECT_THROW(block_derivative(scalar_block(-1, 1, 1, 0, 0), VectorXd::Zero(2)), InvalidArgument);
}

TEST(Rk4, SingleStepOfDecay) {
  auto f = [](double, const VectorXd& x) -> VectorXd { return -x; };
  EXPECT_NEAR(rk4_step(f, 0.0, scalar(1.0), 0.1)(0), 0.9048375, 5e-8);
  // Exact amplification factor of the method.
  const double h = 0.1;
  EXPECT_DOUBLE_EQ(rk4_step(f, 0.0, scalar(1.0), h)(0),
                   1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0);
}

TEST(Rk4, ConstantAndPolynomialDynamicsAreExact) {
  auto zero = [](double, const VectorXd& x) -> VectorXd { return VectorXd::Zero(x.size()); };
  EXPECT_EQ(rk4_step(zero, 0.0, scalar(3.25), 0.7)(0), 3.25);
  auto one = [](double, const VectorXd&) -> VectorXd { return scalar(1.0); };
  EXPECT_DOUBLE_EQ(rk4_step(one, 0.0, scalar(0.0), 0.5)(0), 0.5);
  auto cubic = [](double t, const VectorXd&) -> VectorXd { return scalar(4.0 * t * t * t); };
  EXPECT_NEAR(rk4_step(cubic, 1.0, scalar(1.0), 0.5)(0), std::pow(1.5, 4), 1e-14);
}

TEST(Rk4, GlobalErrorOnUnitInterval) {
  auto f = [](double, const VectorXd& x) -> VectorXd { return -x; };
  VectorXd x = scalar(1.0);
  for (int i = 0; i < 1000; ++i) x = rk4_step(f, i * 1e-3, x, 1e-3);
  EXPECT_LE(std::abs(x(0) - std::exp(-1.0)), 1e-11);
}

TEST(Rk4, FourthOrderConvergence) {
  // x'' + 0.4x' + 4x = sin t against a fine reference.
  auto f = [](double t, const VectorXd& x) -> VectorXd {
    VectorXd d(2);
    d << x(1), -4.0 * x(0) - 0.4 * x(1) + std::sin(t);
    return d;
  };
  auto run = [&](double h, double every) {
    VectorXd x(2);
    x << 1.0, 0.0;
    std::vector<double> out{x(0)};
    const long steps = std::lround(5.0 / h);
    const long stride = std::lround(every / h);
    for (long i = 0; i < steps; ++i) {
      x = rk4_step(f, i * h, x, h);
      if ((i + 1) % stride == 0) out.push_back(x(0));
    }
    return out;
  };
  const auto ref = run(1e-5, 0.05);
  auto err = [&](double h) {
    const auto tr = run(h, 0.05);
    double e = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) e = std::max(e, std::abs(tr[i] - ref[i]));
    return e;
  };
  const double factor = err(0.05) / err(0.025);
  EXPECT_GE(factor, 12.0);
  EXPECT_LE(factor, 20.0);
}

TEST(Rk4, NonFiniteDerivativeThrows) {
  auto f = [](double, const VectorXd&) -> VectorXd { return scalar(std::nan("")); };
  EXPECT_THROW(rk4_step(f, 0.0, scalar(0.0), 0.1), NonFiniteState);
  auto g = [](double, const VectorXd& x) -> VectorXd { return x; };
  EXPECT_THROW(rk4_step(g, 0.0, scalar(0.0), 0.0), InvalidArgument);
}

TEST(AdvanceBlock, StepResponseOfLag) {
  StateSpaceBlock blk = realize_ccf(RationalTF{Polynomial{1.0}, Polynomial{1.0, 1.0}, 1.0});
  blk.x = VectorXd::Zero(1);
  for (int i = 0; i < 20000; ++i) advance_block(blk, scalar(1.0), 1e-3);
  EXPECT_NEAR(block_derivative(blk, scalar(1.0)).y(0), 1.0, 1e-8);
}

TEST(VectorFilter, ChannelsAreIndependentCopies) {
  const StateSpaceBlock proto =
      realize_ccf(RationalTF{Polynomial{1.0}, Polynomial{2.0, 3.0, 1.0}, 1.0});
  const VectorFilter bank(proto, 3);
  EXPECT_EQ(bank.state_size(), 6);
  MatrixXd states(2, 3);
  states << 1, 2, 3, 4, 5, 6;
  VectorXd u(3);
  u << 1, -1, 0.5;
  MatrixXd ds(2, 3);
  bank.derivative(states, u, ds);
  for (int j = 0; j < 3; ++j) {
    const auto single = block_derivative(proto, states.col(j), u.segment(j, 1));
    EXPECT_TRUE(ds.col(j).isApprox(single.dx));
    EXPECT_DOUBLE_EQ(bank.output(states, u)(j), single.y(0));
  }
}
