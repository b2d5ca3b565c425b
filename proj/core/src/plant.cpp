#include "mrac/plant.hpp"

#include <cmath>

#include "mrac/errors.hpp"

namespace mrac {

void PlantModel::validate() const {
  if (p.is_zero() || n() < 1) {
    throw InvalidArgument("plant P must have degree >= 1");
  }
  if (!p.is_monic(1e-12)) {
    throw InvalidArgument("plant P must be monic");
  }
  if (!z.is_monic(1e-12)) {
    throw InvalidArgument("plant Z must be monic");
  }
  if (m() >= n()) {
    throw InvalidArgument("plant must be strictly proper (deg Z < deg P)");
  }
  if (kp == 0.0 || !std::isfinite(kp)) {
    throw InvalidArgument("high-frequency gain must be nonzero");
  }
  if (m() > 0 && !is_hurwitz(z)) {
    throw InvalidArgument("plant Z must be Hurwitz (minimum phase): " + z.to_string());
  }
}

StateSpaceBlock PlantModel::realize() const {
  validate();
  return realize_ccf(RationalTF{z, p, kp});
}

double ReferenceModel::r(double t) const noexcept {
  double v = offset;
  for (const Sinusoid& s : terms) {
    v += s.amplitude * std::sin(s.frequency * t + s.phase);
  }
  return v;
}

void ReferenceModel::validate() const {
  if (rm.degree() < 1 || !rm.is_monic(1e-12)) {
    throw InvalidArgument("Rm must be monic with degree >= 1");
  }
  if (!is_hurwitz(rm)) {
    throw InvalidArgument("Rm must be Hurwitz: " + rm.to_string());
  }
  for (const Sinusoid& s : terms) {
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.frequency) || !std::isfinite(s.phase)) {
      throw InvalidArgument("reference sinusoid parameters must be finite");
    }
  }
}

StateSpaceBlock ReferenceModel::realize() const {
  validate();
  return realize_ccf(RationalTF{Polynomial{1.0}, rm, 1.0});
}

PlantModel boeing_model() {
  PlantModel pm;
  pm.p = Polynomial{0.065, 0.989, 2.174, 1.379, 1.0};
  pm.z = Polynomial{0.050, 0.767, 1.0};
  pm.kp = -0.023;
  return pm;
}

ReferenceModel boeing_reference() {
  ReferenceModel rm;
  rm.rm = Polynomial{108.0, 21.0, 1.0};
  rm.terms = {{1.0, 1.0, 0.0}, {-0.5, 0.5, 0.0}};
  return rm;
}

Polynomial boeing_omega() { return Polynomial{11.25, 18.25, 8.0, 1.0}; }

}  // namespace mrac
