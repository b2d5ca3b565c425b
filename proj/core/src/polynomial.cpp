#include "mrac/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

std::vector<double> trimmed(std::vector<double> c) {
  if (c.empty()) {
    return {0.0};
  }
  double scale = 0.0;
  for (double v : c) {
    scale = std::max(scale, std::abs(v));
  }
  const double tol = Polynomial::kTrimTolerance * scale;
  while (c.size() > 1 && std::abs(c.back()) <= tol) {
    c.pop_back();
  }
  if (c.size() == 1 && std::abs(c[0]) <= tol) {
    c[0] = 0.0;
  }
  return c;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(trimmed(std::move(ascending))) {}

Polynomial Polynomial::from_descending(std::span<const double> descending) {
  return Polynomial(std::vector<double>(descending.rbegin(), descending.rend()));
}

Polynomial Polynomial::monomial(int degree, double coefficient) {
  if (degree < 0) {
    throw InvalidArgument("monomial degree must be non-negative");
  }
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coefficient;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::binomial_power(double root_offset, int power) {
  Polynomial out{1.0};
  const Polynomial factor{root_offset, 1.0};
  for (int i = 0; i < power; ++i) {
    out = poly_mul(out, factor);
  }
  return out;
}

std::vector<double> Polynomial::descending() const {
  return {coeffs_.rbegin(), coeffs_.rend()};
}

bool Polynomial::is_monic(double tol) const noexcept {
  return std::abs(leading() - 1.0) <= tol;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double v : coeffs_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double Polynomial::evaluate(double s) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

std::complex<double> Polynomial::evaluate(std::complex<double> s) const noexcept {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) {
    return Polynomial{};
  }
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * coeffs_[i];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) {
    throw InvalidArgument("cannot normalise the zero polynomial");
  }
  return scaled(1.0 / leading());
}

Polynomial Polynomial::scaled(double c) const {
  std::vector<double> out = coeffs_;
  for (double& v : out) {
    v *= c;
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::to_string(char var) const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const double c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0.0 && !(first && i == 0)) {
      continue;
    }
    if (!first) {
      os << (c < 0 ? " - " : " + ");
    } else if (c < 0) {
      os << "-";
    }
    const double mag = std::abs(c);
    if (i == 0 || mag != 1.0) {
      os << mag;
    }
    if (i >= 1) {
      os << var;
    }
    if (i >= 2) {
      os << '^' << i;
    }
    first = false;
  }
  return os.str();
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  std::vector<double> out(ca.size() + cb.size() - 1, 0.0);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      out[i + j] += ca[i] * cb[j];
    }
  }
  return Polynomial(std::move(out));
}

Polynomial poly_add_scaled(const Polynomial& a, const Polynomial& b, double c) {
  const std::size_t len = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = a[i] + c * b[i];
  }
  return Polynomial(std::move(out));
}

PolyDivision poly_divide(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) {
    throw InvalidArgument("polynomial division by zero");
  }
  const int dn = den.degree();
  if (num.degree() < dn || num.is_zero()) {
    return {Polynomial{}, num};
  }
  std::vector<double> rem = num.coeffs();
  std::vector<double> quo(static_cast<std::size_t>(num.degree() - dn) + 1, 0.0);
  const double lead = den.leading();
  for (int k = num.degree() - dn; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + dn)] / lead;
    quo[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dn; ++j) {
      rem[static_cast<std::size_t>(k + j)] -= q * den[static_cast<std::size_t>(j)];
    }
    rem[static_cast<std::size_t>(k + dn)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(dn, 1)));
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

RouthResult routh_hurwitz(const Polynomial& p) {
  if (p.is_zero()) {
    throw InvalidArgument("Routh test of the zero polynomial");
  }
  RouthResult res;
  const int n = p.degree();
  if (n == 0) {
    res.hurwitz = true;
    res.vacuous = true;
    return res;
  }

  const std::vector<double> a = p.monic().descending();
  const double scale = std::max(1.0, p.monic().max_abs_coeff());
  const double zero_tol = 1e-12 * scale;
  const double eps = 1e-9 * scale;
  const std::size_t width = static_cast<std::size_t>(n) / 2 + 1;

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n) + 1,
                                        std::vector<double>(width + 1, 0.0));
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
    rows[i % 2][i / 2] = a[i];
  }

  auto all_zero = [&](const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(), [&](double v) { return std::abs(v) <= zero_tol; });
  };

  for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
    if (i >= 2) {
      const auto& r2 = rows[i - 2];
      const auto& r1 = rows[i - 1];
      for (std::size_t j = 0; j < width; ++j) {
        rows[i][j] = (r1[0] * r2[j + 1] - r2[0] * r1[j + 1]) / r1[0];
      }
    }
    if (all_zero(rows[i])) {
      // Auxiliary polynomial from the row above; its derivative replaces the
      // vanished row.
      res.singular_row = true;
      const int aux_degree = n - static_cast<int>(i) + 1;
      for (std::size_t j = 0; j < width; ++j) {
        const int power = aux_degree - 2 * static_cast<int>(j);
        rows[i][j] = power > 0 ? rows[i - 1][j] * power : 0.0;
      }
    }
    if (std::abs(rows[i][0]) <= zero_tol) {
      res.singular_row = true;
      rows[i][0] = eps;
    }
  }

  res.first_column.reserve(static_cast<std::size_t>(n) + 1);
  for (const auto& r : rows) {
    res.first_column.push_back(r[0]);
  }
  for (std::size_t i = 1; i < res.first_column.size(); ++i) {
    if ((res.first_column[i - 1] > 0) != (res.first_column[i] > 0)) {
      ++res.rhp_roots;
    }
  }
  res.hurwitz = res.rhp_roots == 0 && !res.singular_row;
  return res;
}

bool is_hurwitz(const Polynomial& p) { return routh_hurwitz(p).hurwitz; }

std::complex<double> RationalTF::evaluate(std::complex<double> s) const {
  return gain * num.evaluate(s) / den.evaluate(s);
}

StateSpaceBlock realize_ccf(const RationalTF& tf) {
  if (tf.den.is_zero()) {
    throw InvalidArgument("transfer function denominator is the zero polynomial");
  }
  if (!tf.is_proper()) {
    throw InvalidArgument("cannot realise improper transfer function: numerator degree " +
                          std::to_string(tf.num.degree()) + " exceeds denominator degree " +
                          std::to_string(tf.den.degree()));
  }
  const double lead = tf.den.leading();
  const Polynomial den = tf.den.scaled(1.0 / lead);
  const Polynomial num = tf.num.scaled(tf.gain / lead);
  const int k = den.degree();

  StateSpaceBlock blk;
  blk.a = MatrixXd::Zero(k, k);
  blk.b = MatrixXd::Zero(k, 1);
  blk.c = MatrixXd::Zero(1, k);
  blk.d = MatrixXd::Zero(1, 1);
  blk.x = VectorXd::Zero(k);

  double d = 0.0;
  if (!num.is_zero() && num.degree() == k) {
    d = num.leading();
  }
  blk.d(0, 0) = d;
  if (k == 0) {
    return blk;
  }
  for (int i = 0; i + 1 < k; ++i) {
    blk.a(i, i + 1) = 1.0;
  }
  for (int j = 0; j < k; ++j) {
    blk.a(k - 1, j) = -den[static_cast<std::size_t>(j)];
  }
  blk.b(k - 1, 0) = 1.0;
  // Strictly proper remainder num - d*den has degree < k.
  for (int j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    blk.c(0, j) = num[idx] - d * den[idx];
  }
  return blk;
}

}  // namespace mrac
