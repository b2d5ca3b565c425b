#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrac/polynomial.hpp"

namespace mrac {

/// Inputs of the plant/model matching identity
///
///   th1' b(s) P(s) + (th2' b(s) + th3 Omega(s)) kp Z(s)
///     = Omega(s) (P(s) - kp th4 Z(s) Rm(s)),   b(s) = [1, s, ..., s^{n-2}]'.
struct MatchingProblem {
  Polynomial plant_den;  // P, monic, degree n
  Polynomial plant_num;  // Z, monic Hurwitz, degree m < n
  double kp = 1.0;
  Polynomial omega;      // monic Hurwitz, degree n-1
  Polynomial rm;         // monic Hurwitz, degree n - m

  int n() const noexcept { return plant_den.degree(); }
  int m() const noexcept { return plant_num.degree(); }
  int relative_degree() const noexcept { return n() - m(); }

  /// Throws InvalidArgument naming the first violated precondition.
  void validate() const;
};

/// Ideal controller gains and the derived quantities the adaptive law
/// estimates. theta_star_full is laid out [th1; th2; th3; th4; th_p; rho; lambda].
struct MatchedGains {
  VectorXd theta1;
  VectorXd theta2;
  double theta3 = 0.0;
  double theta4 = 0.0;
  VectorXd theta_p;
  double rho_star = 0.0;
  double lambda_star = 0.0;
  VectorXd theta_star_full;

  double condition_number = 0.0;
  // Set when the coefficient matrix is poorly conditioned (> 1e12).
  bool ill_conditioned = false;
  std::vector<std::string> warnings;

  /// [th1; th2; th3; th4], length 2n.
  VectorXd theta() const;
};

inline constexpr double kMatchingWarnCondition = 1e12;
inline constexpr double kMatchingSingularCondition = 1e14;

/// (s+1)^{n-1}, the Omega used when a design leaves it unspecified.
Polynomial default_omega(int n);

/// Coefficient-matching solve of the identity above. th4 = 1/kp is set
/// directly; the remaining 2n-1 unknowns come from a square system solved by
/// Gaussian elimination with partial pivoting.
/// Throws InvalidArgument on bad inputs, SingularSystem when P and kp*Z are
/// not coprime enough for a reliable solve.
MatchedGains solve_matching(const MatchingProblem& problem);

/// LHS - RHS of the identity, evaluated by polynomial arithmetic.
Polynomial matching_residual(const MatchedGains& gains, const MatchingProblem& problem);

/// Assemble MatchedGains from the four controller blocks (derives th_p,
/// rho*, lambda* and the full vector).
MatchedGains make_matched_gains(VectorXd theta1, VectorXd theta2, double theta3, double kp);

/// Dense solve A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularSystem on an exactly zero pivot.
VectorXd solve_partial_pivot(MatrixXd a, VectorXd b);

}  // namespace mrac
