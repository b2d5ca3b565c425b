#include "mrac/synthetic.hpp"

#include <array>
#include <random>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

Polynomial roots_to_poly(std::mt19937_64& rng, int degree, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Polynomial p{1.0};
  for (int i = 0; i < degree; ++i) {
    p = p * Polynomial{-d(rng), 1.0};
  }
  return p;
}

}  // namespace

Polynomial random_real_root_polynomial(int degree, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return roots_to_poly(rng, degree, lo, hi);
}

ScenarioConfig synthetic_scenario(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.m < 0 || spec.m >= spec.n) {
    throw InvalidArgument("synthetic plant needs 0 <= m < n");
  }
  std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(spec.n));
  constexpr std::array<double, 4> kGains{-2.0, -0.5, 0.5, 2.0};

  ScenarioConfig cfg;
  cfg.name = "synthetic-n" + std::to_string(spec.n) + "-m" + std::to_string(spec.m) + "-seed" +
             std::to_string(spec.seed);
  cfg.plant.p = roots_to_poly(rng, spec.n, -3.0, 0.5);
  cfg.plant.z = roots_to_poly(rng, spec.m, -3.0, -0.5);
  cfg.plant.kp = kGains[std::uniform_int_distribution<std::size_t>(0, kGains.size() - 1)(rng)];

  const int n_star = spec.n - spec.m;
  cfg.reference.rm = Polynomial::binomial_power(3.0, n_star);
  cfg.reference.terms = {{1.0, 1.0, 0.0}, {-0.5, 0.5, 0.0}};
  cfg.structure.omega = Polynomial::binomial_power(2.0, spec.n - 1);
  cfg.structure.h_den = cfg.reference.rm;

  cfg.controller = ControllerKind::proposed;
  cfg.adaptation.upsilon0_scale = spec.upsilon0_scale;
  cfg.adaptation.theta0_mode = Theta0Mode::multipliers;
  std::uniform_real_distribution<double> mult(0.8, 1.2);
  ProposedMultipliers& k = cfg.adaptation.multipliers;
  k.theta1 = mult(rng);
  k.theta2 = mult(rng);
  k.theta3 = mult(rng);
  k.theta4 = mult(rng);
  k.theta_p = mult(rng);
  k.rho = mult(rng);
  k.lambda = mult(rng);
  cfg.sim.t_final = spec.t_final;
  return cfg;
}

}  // namespace mrac
