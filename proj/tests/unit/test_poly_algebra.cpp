#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "mrac/errors.hpp"
#include "mrac/polynomial.hpp"

using namespace mrac;

namespace {

void expect_coeffs(const Polynomial& p, std::vector<double> ascending, double tol = 1e-12) {
  ASSERT_EQ(p.coeffs().size(), ascending.size()) << p.to_string();
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    EXPECT_NEAR(p.coeffs()[i], ascending[i], tol) << "coefficient of s^" << i;
  }
}

Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::vector<double> v(static_cast<std::size_t>(degree) + 1);
  for (double& x : v) x = c(rng);
  if (std::abs(v.back()) < 0.1) v.back() = 1.0;
  return Polynomial(v);
}

// Largest real part of the roots, from the companion matrix.
double max_root_real_part(const Polynomial& p) {
  const Polynomial q = p.monic();
  const int n = q.degree();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -q.coeffs()[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace

TEST(Polynomial, TrimsTrailingZerosAndKeepsZeroPolynomial) {
  const Polynomial p({1.0, 2.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 1);
  const Polynomial z({0.0, 0.0});
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.degree(), 0);
}

TEST(Polynomial, DescendingRoundTrip) {
  const std::vector<double> desc{1.0, 21.0, 108.0};
  const Polynomial p = Polynomial::from_descending(desc);
  expect_coeffs(p, {108.0, 21.0, 1.0}, 0.0);
  EXPECT_EQ(p.descending(), desc);
}

TEST(Polynomial, BinomialPower) {
  expect_coeffs(Polynomial::binomial_power(1.0, 3), {1.0, 3.0, 3.0, 1.0}, 0.0);
  expect_coeffs(Polynomial::binomial_power(2.0, 0), {1.0}, 0.0);
}

TEST(PolyMul, BinomialSquare) {
  const Polynomial a{1.0, 1.0};
  expect_coeffs(poly_mul(a, a), {1.0, 2.0, 1.0}, 0.0);
}

TEST(PolyMul, BoeingZeroTimesReferenceModel) {
  const Polynomial z{0.050, 0.767, 1.0};
  const Polynomial rm{108.0, 21.0, 1.0};
  expect_coeffs(poly_mul(z, rm), {5.4, 83.886, 124.157, 21.767, 1.0}, 1e-12);
}

TEST(PolyMul, ZeroAnnihilates) {
  const Polynomial a{1.0, -2.0, 3.0};
  EXPECT_TRUE(poly_mul(a, Polynomial{0.0}).is_zero());
}

TEST(PolyAddScaled, CancelsToConstant) {
  const Polynomial a{1.0, 0.0, 1.0};
  const Polynomial b{0.0, 0.0, -1.0};
  expect_coeffs(poly_add_scaled(a, b, 1.0), {1.0}, 0.0);
}

TEST(PolyAddScaled, BoeingLeadingTermCancels) {
  const Polynomial p{0.065, 0.989, 2.174, 1.379, 1.0};
  const Polynomial zrm = poly_mul(Polynomial{0.050, 0.767, 1.0}, Polynomial{108.0, 21.0, 1.0});
  const Polynomial d = poly_add_scaled(p, zrm, -1.0);
  EXPECT_EQ(d.degree(), 3);
  expect_coeffs(d, {0.065 - 5.4, 0.989 - 83.886, 2.174 - 124.157, 1.379 - 21.767}, 1e-12);
}

TEST(PolyAddScaled, ZeroScaleIsIdentity) {
  const Polynomial a{1.0, 2.0, 3.0};
  EXPECT_EQ(poly_add_scaled(a, Polynomial{5.0, 6.0, 7.0, 8.0}, 0.0), a);
}

TEST(PolyAlgebra, MultiplicationDistributesOverAddition) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Polynomial a = random_poly(rng, deg(rng));
    const Polynomial b = random_poly(rng, deg(rng));
    const Polynomial c = random_poly(rng, deg(rng));
    const Polynomial lhs = poly_mul(a, poly_add_scaled(b, c, 1.0));
    const Polynomial rhs = poly_add_scaled(poly_mul(a, b), poly_mul(a, c), 1.0);
    const double scale = std::max({1.0, lhs.max_abs_coeff(), rhs.max_abs_coeff()});
    const Polynomial diff = poly_add_scaled(lhs, rhs, -1.0);
    EXPECT_LE(diff.max_abs_coeff(), 1e-12 * scale) << "trial " << trial;
  }
}

TEST(PolyDivide, QuotientAndRemainder) {
  // (s^2 + 3s + 5) / (s + 1) = (s + 2) rem 3
  const PolyDivision d = poly_divide(Polynomial{5.0, 3.0, 1.0}, Polynomial{1.0, 1.0});
  expect_coeffs(d.quotient, {2.0, 1.0});
  expect_coeffs(d.remainder, {3.0});
}

TEST(Hurwitz, Examples) {
  EXPECT_TRUE(is_hurwitz(Polynomial{1.0, 1.0}));
  EXPECT_TRUE(is_hurwitz(Polynomial{0.050, 0.767, 1.0}));
  EXPECT_FALSE(is_hurwitz(Polynomial{-1.0, 0.0, 1.0}));
  EXPECT_TRUE(is_hurwitz(Polynomial{11.25, 18.25, 8.0, 1.0}));
  EXPECT_FALSE(is_hurwitz(Polynomial{-11.25, 18.25, 8.0, 1.0}));
}

TEST(Routh, ImaginaryAxisPairGivesZeroRow) {
  const RouthResult r = routh_hurwitz(Polynomial{1.0, 0.0, 1.0});
  EXPECT_FALSE(r.hurwitz);
  EXPECT_TRUE(r.singular_row);
}

TEST(Routh, CountsRightHalfPlaneRootsThroughZeroPivot) {
  // (s - 1)(s - 2)(s + 3) = s^3 - 7s + 6: zero s^2 coefficient.
  const RouthResult r = routh_hurwitz(Polynomial{6.0, -7.0, 0.0, 1.0});
  EXPECT_FALSE(r.hurwitz);
  EXPECT_EQ(r.rhp_roots, 2);
}

TEST(Routh, AgreesWithCompanionEigenvalues) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(1, 6);
  std::uniform_real_distribution<double> root_re(-4.0, 1.0), root_im(0.0, 3.0);
  std::bernoulli_distribution complex_pair(0.4);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Half from random roots (hits the stable region often), half from raw coefficients.
    Polynomial p{1.0};
    const int d = deg(rng);
    if (trial % 2 == 0) {
      while (p.degree() < d) {
        const double re = root_re(rng);
        if (p.degree() + 2 <= d && complex_pair(rng)) {
          const double im = root_im(rng);
          p = p * Polynomial{re * re + im * im, -2.0 * re, 1.0};
        } else {
          p = p * Polynomial{-re, 1.0};
        }
      }
    } else {
      p = random_poly(rng, d);
    }
    const double max_re = max_root_real_part(p);
    if (std::abs(max_re) < 1e-6) continue;  // too close to the axis to call
    ++checked;
    EXPECT_EQ(is_hurwitz(p), max_re < 0.0) << p.to_string() << " max Re = " << max_re;
  }
  EXPECT_GT(checked, 950);
}

TEST(RealizeCcf, FirstOrderLag) {
  const StateSpaceBlock b = realize_ccf(RationalTF{Polynomial{1.0}, Polynomial{1.0, 1.0}, 1.0});
  ASSERT_EQ(b.states(), 1);
  EXPECT_DOUBLE_EQ(b.a(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(b.b(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.c(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.d(0, 0), 0.0);
}

TEST(RealizeCcf, BiproperReferenceOverItselfIsUnitFeedthrough) {
  const Polynomial rm{108.0, 21.0, 1.0};
  const StateSpaceBlock b = realize_ccf(RationalTF{rm, rm, 1.0});
  EXPECT_DOUBLE_EQ(b.d(0, 0), 1.0);
  EXPECT_LE(b.c.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RealizeCcf, DcGainOfSecondOrderExample) {
  const StateSpaceBlock b =
      realize_ccf(RationalTF{Polynomial{2.0, 1.0}, Polynomial{2.0, 3.0, 1.0}, 1.0});
  EXPECT_EQ(b.states(), 2);
  EXPECT_DOUBLE_EQ(b.d(0, 0), 0.0);
  EXPECT_NEAR(std::abs(b.frequency_response({0.0, 0.0}) - 1.0), 0.0, 1e-14);
}

TEST(RealizeCcf, RejectsImproper) {
  EXPECT_THROW(realize_ccf(RationalTF{Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0}, 1.0}),
               InvalidArgument);
}

TEST(RealizeCcf, FrequencyResponseMatchesDirectEvaluation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pole(-5.0, -0.2), coef(-2.0, 2.0), gain(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    Polynomial den{1.0};
    for (int i = 0; i < n; ++i) den = den * Polynomial{-pole(rng), 1.0};
    std::vector<double> num(static_cast<std::size_t>(1 + trial % (n + 1)));
    for (double& c : num) c = coef(rng);
    const RationalTF tf{Polynomial(num), den, gain(rng)};
    const StateSpaceBlock b = realize_ccf(tf);
    for (int k = 0; k < 20; ++k) {
      const std::complex<double> s(0.0, std::pow(10.0, -2.0 + 0.2 * k));
      const std::complex<double> direct = tf.evaluate(s);
      const std::complex<double> ss = b.frequency_response(s);
      EXPECT_LE(std::abs(ss - direct), 1e-9 * std::max(1.0, std::abs(direct)))
          << "trial " << trial << " w " << s.imag();
    }
  }
}
