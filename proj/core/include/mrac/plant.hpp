#pragma once

#include <vector>

#include "mrac/lti.hpp"
#include "mrac/polynomial.hpp"

namespace mrac {

/// P(s)[y] = kp Z(s)[u] with monic P (degree n) and monic Hurwitz Z (degree m < n).
struct PlantModel {
  Polynomial p;
  Polynomial z{1.0};
  double kp = 1.0;

  int n() const noexcept { return p.degree(); }
  int m() const noexcept { return z.degree(); }
  int relative_degree() const noexcept { return n() - m(); }

  /// Throws InvalidArgument if any structural assumption fails.
  void validate() const;
  /// Strictly proper CCF realisation of kp Z/P.
  StateSpaceBlock realize() const;
};

/// r(t) = offset + sum_i a_i sin(w_i t + phase_i), filtered by 1/Rm to give y*.
struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad
};

struct ReferenceModel {
  Polynomial rm{1.0};
  double offset = 0.0;
  std::vector<Sinusoid> terms;

  double r(double t) const noexcept;
  void validate() const;
  StateSpaceBlock realize() const;
};

/// Linearised Boeing 737 longitudinal pitch dynamics:
/// P = s^4 + 1.379s^3 + 2.174s^2 + 0.989s + 0.065, Z = s^2 + 0.767s + 0.050, kp = -0.023.
PlantModel boeing_model();

/// Rm = s^2 + 21s + 108 driven by r(t) = sin t - 0.5 sin 0.5t.
ReferenceModel boeing_reference();

/// Omega = s^3 + 8s^2 + 18.25s + 11.25 used in the Boeing design.
Polynomial boeing_omega();

}  // namespace mrac
