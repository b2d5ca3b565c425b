#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mrac/lti.hpp"

namespace mrac {

/// Real polynomial stored in ascending powers: coeffs()[i] multiplies s^i.
///
/// The zero polynomial is represented as [0]. Trailing coefficients whose
/// magnitude is below kTrimTolerance times the largest coefficient are dropped
/// on construction, so degree() is the index of the last retained entry.
class Polynomial {
 public:
  static constexpr double kTrimTolerance = 1e-14;

  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending)
      : Polynomial(std::vector<double>(ascending)) {}

  /// Build from highest-power-first coefficients, e.g. {1, 2, 3} -> s^2+2s+3.
  static Polynomial from_descending(std::span<const double> descending);
  static Polynomial monomial(int degree, double coefficient = 1.0);
  /// (s + root_offset)^power; handy for default Hurwitz designs.
  static Polynomial binomial_power(double root_offset, int power);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::vector<double> descending() const;
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  /// Coefficient of s^i, zero beyond the degree.
  double operator[](std::size_t i) const noexcept {
    return i < coeffs_.size() ? coeffs_[i] : 0.0;
  }
  double leading() const noexcept { return coeffs_.back(); }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  bool is_monic(double tol = 0.0) const noexcept;
  double max_abs_coeff() const noexcept;

  double evaluate(double s) const noexcept;
  std::complex<double> evaluate(std::complex<double> s) const noexcept;
  Polynomial derivative() const;
  /// Divide every coefficient by the leading one.
  Polynomial monic() const;
  Polynomial scaled(double c) const;

  std::string to_string(char var = 's') const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Coefficient convolution a*b.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
/// a + c*b with trailing-zero normalisation.
Polynomial poly_add_scaled(const Polynomial& a, const Polynomial& b, double c);

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }
inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  return poly_add_scaled(a, b, 1.0);
}
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return poly_add_scaled(a, b, -1.0);
}

/// Quotient and remainder of num / den.
struct PolyDivision {
  Polynomial quotient;
  Polynomial remainder;
};
PolyDivision poly_divide(const Polynomial& num, const Polynomial& den);

// ---------------------------------------------------------------------------
// Routh-Hurwitz
// ---------------------------------------------------------------------------

struct RouthResult {
  bool hurwitz = false;
  // Degree-0 input: no roots, reported as stable but flagged.
  bool vacuous = false;
  // Number of sign changes in the first column (roots in the open RHP).
  int rhp_roots = 0;
  // A zero row (roots symmetric about the origin, e.g. on the jw axis) or a
  // zero pivot was met; the polynomial cannot be strictly Hurwitz.
  bool singular_row = false;
  std::vector<double> first_column;
};

/// Full tabular Routh test. Zero pivots are replaced by a small epsilon and
/// all-zero rows by the derivative of the auxiliary polynomial.
RouthResult routh_hurwitz(const Polynomial& p);
/// True iff every root lies strictly in the open left half-plane.
bool is_hurwitz(const Polynomial& p);

// ---------------------------------------------------------------------------
// Rational transfer functions
// ---------------------------------------------------------------------------

/// gain * num(s) / den(s)
struct RationalTF {
  Polynomial num{1.0};
  Polynomial den{1.0};
  double gain = 1.0;

  bool is_proper() const noexcept { return num.degree() <= den.degree(); }
  bool is_strictly_proper() const noexcept {
    return num.is_zero() || num.degree() < den.degree();
  }
  std::complex<double> evaluate(std::complex<double> s) const;
};

/// Controllable canonical form of a proper transfer function.
///
/// Denominator s^k + a_{k-1}s^{k-1} + ... + a_0 (normalised to monic) gives
/// states x_i = s^i/den[u], i = 0..k-1, so the state vector of a 1/den
/// realisation is exactly [1, s, ..., s^{k-1}]^T/den applied to the input.
/// Biproper inputs get feedthrough d = gain * lead(num)/lead(den).
/// Throws InvalidArgument for improper or zero-denominator input.
StateSpaceBlock realize_ccf(const RationalTF& tf);

}  // namespace mrac
