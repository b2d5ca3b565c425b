#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mrac/errors.hpp"
#include "mrac/matching.hpp"
#include "mrac/plant.hpp"
#include "mrac_app/suites.hpp"

using namespace mrac;

namespace {

MatchingProblem boeing_problem() {
  MatchingProblem mp;
  const PlantModel p = boeing_model();
  mp.plant_den = p.p;
  mp.plant_num = p.z;
  mp.kp = p.kp;
  mp.omega = boeing_omega();
  mp.rm = boeing_reference().rm;
  return mp;
}

double residual_norm(const MatchingProblem& mp) {
  return matching_residual(solve_matching(mp), mp).max_abs_coeff();
}

}  // namespace

TEST(BoeingModel, PublishedPlant) {
  const PlantModel p = boeing_model();
  EXPECT_DOUBLE_EQ(p.kp, -0.023);
  EXPECT_TRUE(is_hurwitz(p.z));
  EXPECT_EQ(p.relative_degree(), 2);
  EXPECT_EQ(p.p.descending(), (std::vector<double>{1.0, 1.379, 2.174, 0.989, 0.065}));
}

TEST(SolveMatching, BoeingGainsSatisfyTheIdentity) {
  const MatchingProblem mp = boeing_problem();
  const MatchedGains g = solve_matching(mp);
  EXPECT_EQ(g.theta1.size(), 3);
  EXPECT_EQ(g.theta2.size(), 3);
  EXPECT_EQ(g.theta_star_full.size(), 18);
  EXPECT_LE(matching_residual(g, mp).max_abs_coeff(), app::matching_tolerance(mp));
  // theta4 and lambda* follow from kp alone.
  EXPECT_NEAR(g.theta4, -43.478, 1e-3);
  EXPECT_NEAR(g.lambda_star, -43.478, 1e-3);
  EXPECT_DOUBLE_EQ(g.rho_star, -0.023);
}

TEST(SolveMatching, PlantAlreadyMatchingReferenceModel) {
  // Z = 1 keeps P and Z coprime; with m > 0 the product shares Z's roots.
  MatchingProblem mp;
  mp.plant_num = Polynomial{1.0};
  mp.rm = Polynomial{2.0, 3.0, 1.0};
  mp.plant_den = mp.plant_num * mp.rm;
  mp.kp = 1.0;
  mp.omega = default_omega(2);
  const MatchedGains g = solve_matching(mp);
  EXPECT_LE(g.theta1.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(g.theta2.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(g.theta3, 0.0, 1e-12);
  EXPECT_EQ(g.theta4, 1.0);
  EXPECT_LE(matching_residual(g, mp).max_abs_coeff(), 1e-12);
}

TEST(SolveMatching, CommonRootIsReportedAsSingular) {
  // P = (s+1)(s+2) and Z = s+1 share a root, so the gains are not unique.
  MatchingProblem mp;
  mp.plant_den = Polynomial{2.0, 3.0, 1.0};
  mp.plant_num = Polynomial{1.0, 1.0};
  mp.kp = 2.0;
  mp.omega = Polynomial{1.0, 1.0};
  mp.rm = Polynomial{4.0, 1.0};
  EXPECT_THROW(solve_matching(mp), SingularSystem);
}

TEST(SolveMatching, SecondOrderRelativeDegreeOne) {
  MatchingProblem mp;
  mp.plant_den = Polynomial{2.0, 3.0, 1.0};
  mp.plant_num = Polynomial{3.0, 1.0};
  mp.kp = 2.0;
  mp.omega = Polynomial{1.0, 1.0};
  mp.rm = Polynomial{4.0, 1.0};
  EXPECT_LE(residual_norm(mp), 1e-12);
}

TEST(SolveMatching, RejectsZeroHighFrequencyGain) {
  MatchingProblem mp = boeing_problem();
  mp.kp = 0.0;
  try {
    solve_matching(mp);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& ex) {
    EXPECT_NE(std::string(ex.what()).find("high-frequency gain must be nonzero"), std::string::npos);
  }
}

TEST(SolveMatching, RejectsBadDesignPolynomials) {
  MatchingProblem mp = boeing_problem();
  mp.omega = Polynomial{-11.25, 18.25, 8.0, 1.0};
  EXPECT_THROW(solve_matching(mp), InvalidArgument);
  mp = boeing_problem();
  mp.rm = Polynomial{108.0, 1.0};
  EXPECT_THROW(solve_matching(mp), InvalidArgument);
}

TEST(MatchingResidual, TrivialGainsGiveZero) {
  MatchingProblem mp;
  mp.plant_num = Polynomial{1.0};
  mp.rm = Polynomial{2.0, 3.0, 1.0};
  mp.plant_den = mp.rm;
  mp.kp = 1.0;
  mp.omega = Polynomial{1.0, 1.0};
  const MatchedGains g = make_matched_gains(VectorXd::Zero(1), VectorXd::Zero(1), 0.0, 1.0);
  EXPECT_TRUE(matching_residual(g, mp).is_zero());
}

TEST(MatchingResidual, Theta3PerturbationIsVisible) {
  const MatchingProblem mp = boeing_problem();
  const MatchedGains g = solve_matching(mp);
  const MatchedGains bumped = make_matched_gains(g.theta1, g.theta2, g.theta3 + 1.0, mp.kp);
  const double expected = (mp.plant_num * mp.omega).scaled(mp.kp).max_abs_coeff();
  EXPECT_GE(matching_residual(bumped, mp).max_abs_coeff(), 0.99 * expected);
}

TEST(SolveMatching, RandomPlantsMeetResidualBound) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MatchingProblem mp = app::random_matching_problem(seed);
    ASSERT_GE(mp.n(), 2);
    ASSERT_LE(mp.n(), 5);
    EXPECT_LE(residual_norm(mp), app::matching_tolerance(mp)) << "seed " << seed;
  }
}

TEST(SolveMatching, Theta4IsReciprocalOfKp) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MatchingProblem mp = app::random_matching_problem(seed);
    EXPECT_EQ(solve_matching(mp).theta4, 1.0 / mp.kp);
  }
}

TEST(SolveMatching, KpScalingActsOnFeedbackGainsOnly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> alpha_dist(0.2, 4.0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const MatchingProblem mp = app::random_matching_problem(seed);
    MatchingProblem scaled = mp;
    const double alpha = alpha_dist(rng);
    scaled.kp *= alpha;
    const MatchedGains a = solve_matching(mp);
    const MatchedGains b = solve_matching(scaled);
    const double s1 = 1.0 + a.theta1.cwiseAbs().maxCoeff();
    const double s2 = 1.0 + a.theta2.cwiseAbs().maxCoeff() + std::abs(a.theta3);
    EXPECT_LE((a.theta1 - b.theta1).cwiseAbs().maxCoeff(), 1e-8 * s1) << "seed " << seed;
    EXPECT_LE((a.theta2 / alpha - b.theta2).cwiseAbs().maxCoeff(), 1e-8 * s2) << "seed " << seed;
    EXPECT_NEAR(a.theta3 / alpha, b.theta3, 1e-8 * s2) << "seed " << seed;
  }
}

TEST(MatchedGains, DerivedQuantities) {
  const MatchedGains g = solve_matching(boeing_problem());
  const double kp = -0.023;
  EXPECT_TRUE(g.theta_p.isApprox(kp * g.theta(), 1e-14));
  EXPECT_DOUBLE_EQ(g.theta_star_full(16), g.rho_star);
  EXPECT_DOUBLE_EQ(g.theta_star_full(17), g.lambda_star);
  EXPECT_EQ(g.theta_star_full.head(8), g.theta());
}

TEST(DefaultOmega, IsBinomial) {
  EXPECT_EQ(default_omega(4), Polynomial::binomial_power(1.0, 3));
  EXPECT_TRUE(is_hurwitz(default_omega(5)));
}
