#include <gtest/gtest.h>

#include <cmath>

#include "mrac/errors.hpp"
#include "mrac/harness.hpp"
#include "mrac/metrics.hpp"
#include "mrac/synthetic.hpp"

using namespace mrac;

namespace {

ScenarioConfig short_case(BoeingCase which, double t_final) {
  ScenarioConfig cfg = boeing_scenario(which);
  cfg.sim.t_final = t_final;
  return cfg;
}

ScenarioConfig matched_start(double t_final) {
  ScenarioConfig cfg = short_case(BoeingCase::i, t_final);
  cfg.adaptation.multipliers = ProposedMultipliers{};
  cfg.sim.record_stride = 1;
  return cfg;
}

}  // namespace

TEST(BoeingScenario, ReferenceStartsAtZero) {
  for (BoeingCase c : {BoeingCase::i, BoeingCase::ii}) {
    const ScenarioConfig cfg = boeing_scenario(c);
    EXPECT_EQ(cfg.reference.r(0.0), 0.0);
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.plant.relative_degree(), 2);
  }
  EXPECT_NE(boeing_scenario(BoeingCase::i).name, boeing_scenario(BoeingCase::ii).name);
}

TEST(BoeingScenario, InitialEstimatesFollowMultipliers) {
  const ScenarioConfig cfg = boeing_scenario(BoeingCase::ii);
  const MatchedGains g = solve_matching(cfg.matching_problem());
  const VectorXd th0 = resolve_theta0(cfg, g);
  ASSERT_EQ(th0.size(), 18);
  EXPECT_DOUBLE_EQ(th0(0), 0.8 * g.theta1(0));
  EXPECT_DOUBLE_EQ(th0(7), -0.3 * g.theta4);
  EXPECT_DOUBLE_EQ(th0(16), -0.5 * g.rho_star);
  EXPECT_DOUBLE_EQ(th0(17), -0.5 * g.lambda_star);
}

TEST(ClosedLoop, BoeingStateDimension) {
  const ClosedLoop loop = assemble_closed_loop(boeing_scenario(BoeingCase::i));
  // plant 4 + reference 2 + phi filters 3+3 + ebar 2 + zeta 17x2 + eta 2 + Theta 18 + Upsilon 18x18
  EXPECT_EQ(loop.state_size(), 4 + 2 + 3 + 3 + 2 + 34 + 2 + 18 + 324);
  EXPECT_TRUE(loop.is_proposed());
}

TEST(ClosedLoop, ZeroInputEquilibrium) {
  ScenarioConfig cfg = matched_start(5.0);
  cfg.reference.terms.clear();
  const RunRecord rec = run_scenario(cfg);
  ASSERT_FALSE(rec.aborted) << rec.abort_reason;
  for (const Sample& s : rec.samples) {
    ASSERT_EQ(s.y, 0.0);
    ASSERT_EQ(s.u, 0.0);
    ASSERT_EQ(s.e, 0.0);
    ASSERT_EQ(s.eps_bar, 0.0);
  }
  EXPECT_EQ(rec.theta_samples.front(), rec.theta_samples.back());
}

TEST(ClosedLoop, MatchedGainsTrackExactly) {
  const RunRecord rec = run_scenario(matched_start(20.0));
  ASSERT_FALSE(rec.aborted) << rec.abort_reason;
  double worst = 0.0;
  for (const Sample& s : rec.samples) worst = std::max(worst, std::abs(s.e));
  EXPECT_LE(worst, 1e-8);
}

TEST(ClosedLoop, RegressionIdentityAlongCaseOne) {
  const RunRecord rec = run_scenario(short_case(BoeingCase::i, 10.0));
  ASSERT_FALSE(rec.aborted);
  EXPECT_LE(rec.stats.max_regression_residual, 1e-4);
}

TEST(ClosedLoop, SigmaIsHeldWhileDerivativeIsPure) {
  const ClosedLoop loop = assemble_closed_loop(boeing_scenario(BoeingCase::ii));
  const VectorXd x0 = loop.initial_state();
  const double sigma = loop.select_sigma(x0);
  EXPECT_EQ(loop.derivative(0.3, x0, sigma), loop.derivative(0.3, x0, sigma));
}

TEST(RunScenario, Deterministic) {
  const ScenarioConfig cfg = short_case(BoeingCase::ii, 5.0);
  const RunRecord a = run_scenario(cfg);
  const RunRecord b = run_scenario(cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    ASSERT_EQ(a.samples[i].y, b.samples[i].y);
    ASSERT_EQ(a.samples[i].u, b.samples[i].u);
    ASSERT_EQ(a.theta_samples[i], b.theta_samples[i]);
  }
}

TEST(RunScenario, RowCountFollowsStride) {
  ScenarioConfig cfg = short_case(BoeingCase::i, 2.0);
  cfg.sim.record_stride = 10;
  EXPECT_EQ(run_scenario(cfg).samples.size(), 2.0 / 1e-3 / 10 + 1);
}

TEST(RunScenario, CaseOneKeepsSigmaAtMinusOne) {
  const RunRecord rec = run_scenario(short_case(BoeingCase::i, 10.0));
  const MetricsSummary m = compute_metrics(rec);
  EXPECT_EQ(m.sigma_switch_count, 0);
  EXPECT_GE(m.min_margin_u, 1.0);
  for (const Sample& s : rec.samples) ASSERT_EQ(s.sigma, -1.0);
}

TEST(RunScenario, MarginsHoldInCaseTwo) {
  const RunRecord rec = run_scenario(short_case(BoeingCase::ii, 30.0));
  ASSERT_FALSE(rec.aborted) << rec.abort_reason;
  for (const Sample& s : rec.samples) {
    ASSERT_GE(s.margin_u, 1.0) << "t = " << s.t;
    ASSERT_NE(s.margin_lambda, 0.0) << "t = " << s.t;
  }
  EXPECT_LT(compute_metrics(rec).sigma_switch_count, 30000);
}

TEST(RunScenario, UpsilonStaysPositiveAndVDoesNotGrow) {
  const RunRecord rec = run_scenario(short_case(BoeingCase::i, 20.0));
  EXPECT_GT(rec.stats.min_eig_upsilon, 0.0);
  EXPECT_EQ(rec.stats.v_violations, 0);
  EXPECT_TRUE(std::isfinite(rec.stats.theta_dot_sq_integral));
}

TEST(RunScenario, DivergenceIsReportedNotThrown) {
  ScenarioConfig cfg = short_case(BoeingCase::i, 200.0);
  cfg.sim.dt = 0.5;  // far outside the RK4 stability region of the filters
  cfg.sim.record_stride = 1;
  RunRecord rec;
  ASSERT_NO_THROW(rec = run_scenario(cfg));
  EXPECT_TRUE(rec.aborted);
  EXPECT_FALSE(rec.abort_reason.empty());
  EXPECT_FALSE(compute_metrics(rec).all_finite);
}

TEST(RunScenario, RejectsExplicitThetaOfWrongLength) {
  ScenarioConfig cfg = short_case(BoeingCase::i, 1.0);
  cfg.adaptation.theta0_mode = Theta0Mode::explicit_values;
  cfg.adaptation.theta0_values = {1.0, 2.0};
  EXPECT_THROW(run_scenario(cfg), InvalidArgument);
}

TEST(Baseline, FrozenMatchedGainsTrack) {
  ScenarioConfig cfg = boeing_baseline_scenario();
  cfg.baseline.frozen = true;
  cfg.baseline.theta_multiplier = 1.0;
  cfg.baseline.chi_multiplier = 1.0;
  cfg.sim.t_final = 20.0;
  const RunRecord rec = run_scenario(cfg);
  for (const Sample& s : rec.samples) {
    if (s.t >= 10.0) ASSERT_LE(std::abs(s.e), 1e-6) << "t = " << s.t;
  }
}

TEST(Metrics, ZeroErrorWindowGivesZeroRatio) {
  RunRecord rec;
  for (int i = 0; i <= 100; ++i) {
    Sample s;
    s.t = i;
    s.y_star = std::sin(0.1 * i);
    s.sigma = -1.0;
    rec.samples.push_back(s);
  }
  const MetricsSummary m = compute_metrics(rec);
  EXPECT_EQ(m.tracking_ratio, 0.0);
  EXPECT_EQ(m.sigma_switch_count, 0);
  EXPECT_TRUE(m.sigma_constant_second_half);
  EXPECT_EQ(m.final_sigma, -1.0);
  EXPECT_TRUE(m.all_finite);
}

TEST(Metrics, RatioUsesFinalFifth) {
  RunRecord rec;
  for (int i = 0; i <= 100; ++i) {
    Sample s;
    s.t = i;
    s.y_star = 2.0;
    s.e = i < 80 ? 100.0 : 0.2;
    s.sigma = i < 60 ? 1.0 : 0.0;
    rec.samples.push_back(s);
  }
  const MetricsSummary m = compute_metrics(rec);
  EXPECT_NEAR(m.tracking_ratio, 0.1, 1e-15);
  EXPECT_FALSE(m.sigma_constant_second_half);
}

TEST(Synthetic, ScenarioShape) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.n = 4;
    spec.m = 1;
    spec.seed = seed;
    const ScenarioConfig cfg = synthetic_scenario(spec);
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.plant.relative_degree(), 3);
    const double kp = std::abs(cfg.plant.kp);
    EXPECT_TRUE(kp == 0.5 || kp == 2.0) << cfg.plant.kp;
    EXPECT_TRUE(is_hurwitz(cfg.plant.z));
    EXPECT_EQ(cfg.sim.t_final, 300.0);
    EXPECT_EQ(synthetic_scenario(spec).plant.p, cfg.plant.p);
  }
}
