#pragma once

#include <cstdint>

#include "mrac/harness.hpp"

namespace mrac {

/// Seeded random plant for relative-degree sweeps.
struct SyntheticSpec {
  int n = 2;
  int m = 1;
  std::uint64_t seed = 0;
  double t_final = 300.0;
  double upsilon0_scale = kLargePriorScale;
};

/// Monic P with real roots in [-3, 0.5], monic Hurwitz Z with roots in
/// [-3, -0.5], kp drawn from {-2, -0.5, 0.5, 2}, Rm = H_den = (s+3)^{n*},
/// Omega = (s+2)^{n-1}, Theta0 = per-block multipliers in [0.8, 1.2] of the
/// matched gains, r(t) = sin t - 0.5 sin 0.5t.
ScenarioConfig synthetic_scenario(const SyntheticSpec& spec);

/// Random monic polynomial of the given degree with real roots in [lo, hi].
Polynomial random_real_root_polynomial(int degree, double lo, double hi, std::uint64_t seed);

}  // namespace mrac
