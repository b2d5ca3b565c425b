#include "mrac/matching.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

void require_monic_hurwitz(const Polynomial& p, const char* name, int degree) {
  if (p.degree() != degree) {
    throw InvalidArgument(std::string(name) + " must have degree " + std::to_string(degree) +
                          ", got " + std::to_string(p.degree()));
  }
  if (!p.is_monic(1e-12)) {
    throw InvalidArgument(std::string(name) + " must be monic");
  }
  if (degree > 0 && !is_hurwitz(p)) {
    throw InvalidArgument(std::string(name) + " must be Hurwitz: " + p.to_string());
  }
}

// s^shift * p, coefficients placed into a column of length rows.
void place(MatrixXd& a, Index col, const Polynomial& p, int shift, double scale) {
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const Index row = static_cast<Index>(i) + shift;
    if (row < a.rows()) {
      a(row, col) += scale * p.coeffs()[i];
    }
  }
}

}  // namespace

void MatchingProblem::validate() const {
  if (plant_den.is_zero() || plant_den.degree() < 1) {
    throw InvalidArgument("plant denominator P must have degree >= 1");
  }
  if (!plant_den.is_monic(1e-12)) {
    throw InvalidArgument("plant denominator P must be monic");
  }
  if (kp == 0.0 || !std::isfinite(kp)) {
    throw InvalidArgument("high-frequency gain must be nonzero");
  }
  if (m() >= n()) {
    throw InvalidArgument("plant numerator Z must have degree < deg P (strictly proper plant)");
  }
  require_monic_hurwitz(plant_num, "plant numerator Z", m());
  require_monic_hurwitz(omega, "Omega", n() - 1);
  require_monic_hurwitz(rm, "Rm", relative_degree());
}

VectorXd MatchedGains::theta() const {
  const Index k = theta1.size();
  VectorXd t(2 * k + 2);
  t << theta1, theta2, theta3, theta4;
  return t;
}

Polynomial default_omega(int n) {
  if (n < 1) {
    throw InvalidArgument("default_omega requires n >= 1");
  }
  return Polynomial::binomial_power(1.0, n - 1);
}

MatchedGains make_matched_gains(VectorXd theta1, VectorXd theta2, double theta3, double kp) {
  MatchedGains g;
  g.theta1 = std::move(theta1);
  g.theta2 = std::move(theta2);
  g.theta3 = theta3;
  g.theta4 = 1.0 / kp;
  g.rho_star = kp;
  g.lambda_star = g.theta4;
  const VectorXd th = g.theta();
  g.theta_p = kp * th;
  // kp * (1/kp) is not always exactly 1 in floating point.
  g.theta_p(g.theta_p.size() - 1) = 1.0;
  g.theta_star_full.resize(2 * th.size() + 2);
  g.theta_star_full << th, g.theta_p, g.rho_star, g.lambda_star;
  return g;
}

VectorXd solve_partial_pivot(MatrixXd a, VectorXd b) {
  const Index n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw InvalidArgument("solve_partial_pivot: dimension mismatch");
  }
  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    double best = std::abs(a(k, k));
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) {
      throw SingularSystem("zero pivot in column " + std::to_string(k),
                           std::numeric_limits<double>::infinity());
    }
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(b(k), b(piv));
    }
    for (Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) {
        continue;
      }
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
      b(i) -= f * b(k);
    }
  }
  VectorXd x(n);
  for (Index i = n - 1; i >= 0; --i) {
    double acc = b(i);
    for (Index j = i + 1; j < n; ++j) {
      acc -= a(i, j) * x(j);
    }
    x(i) = acc / a(i, i);
  }
  return x;
}

MatchedGains solve_matching(const MatchingProblem& problem) {
  problem.validate();
  const int n = problem.n();
  const Index unknowns = 2 * n - 1;
  const double kp = problem.kp;

  // Columns: s^i P (th1_i), kp s^i Z (th2_i), kp Omega Z (th3).
  MatrixXd a = MatrixXd::Zero(unknowns, unknowns);
  for (int i = 0; i < n - 1; ++i) {
    place(a, i, problem.plant_den, i, 1.0);
    place(a, n - 1 + i, problem.plant_num, i, kp);
  }
  place(a, unknowns - 1, poly_mul(problem.omega, problem.plant_num), 0, kp);

  // With kp*th4 = 1 the s^n terms of P and Z*Rm cancel.
  const Polynomial rhs_poly =
      poly_mul(problem.omega, problem.plant_den - poly_mul(problem.plant_num, problem.rm));
  if (!rhs_poly.is_zero() && rhs_poly.degree() > unknowns - 1) {
    throw InvalidArgument("matching right-hand side exceeds degree 2n-2; is Rm monic?");
  }
  VectorXd rhs = VectorXd::Zero(unknowns);
  for (std::size_t i = 0; i < rhs_poly.coeffs().size(); ++i) {
    rhs(static_cast<Index>(i)) = rhs_poly.coeffs()[i];
  }

  const Eigen::JacobiSVD<MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                               : std::numeric_limits<double>::infinity();
  if (!(cond < kMatchingSingularCondition)) {
    std::ostringstream os;
    os << "matching system is singular (condition number " << cond
       << "); P and Z likely share a root";
    throw SingularSystem(os.str(), cond);
  }

  const VectorXd x = solve_partial_pivot(a, rhs);
  MatchedGains g = make_matched_gains(x.head(n - 1), x.segment(n - 1, n - 1), x(unknowns - 1), kp);
  g.condition_number = cond;
  if (cond > kMatchingWarnCondition) {
    g.ill_conditioned = true;
    std::ostringstream os;
    os << "matching system is ill-conditioned (condition number " << cond << ")";
    g.warnings.push_back(os.str());
  }
  return g;
}

Polynomial matching_residual(const MatchedGains& gains, const MatchingProblem& problem) {
  const int n = problem.n();
  if (gains.theta1.size() != n - 1 || gains.theta2.size() != n - 1) {
    throw InvalidArgument("matching_residual: gain dimensions do not match n-1 = " +
                          std::to_string(n - 1));
  }
  auto dot_b = [](const VectorXd& th) {
    return Polynomial(std::vector<double>(th.data(), th.data() + th.size()));
  };
  const Polynomial lhs =
      poly_mul(dot_b(gains.theta1), problem.plant_den) +
      poly_mul(poly_add_scaled(dot_b(gains.theta2), problem.omega, gains.theta3),
               problem.plant_num.scaled(problem.kp));
  const Polynomial rhs =
      poly_mul(problem.omega,
               poly_add_scaled(problem.plant_den, poly_mul(problem.plant_num, problem.rm),
                               -problem.kp * gains.theta4));
  return lhs - rhs;
}

}  // namespace mrac
