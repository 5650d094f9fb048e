#include "incde/core/voigt.hpp"

namespace incde::mech {

PressureDeviator pressure_deviator(const Stress& sigma) {
  const Vec6& v = sigma.vec();
  PressureDeviator out;
  out.p = (v[0] + v[1] + v[2]) / 3.0;
  out.s = Stress(v - out.p * identity6());
  return out;
}

double von_mises_stress(const Stress& sigma) {
  return std::sqrt(1.5 * contract(deviator(sigma.vec()), deviator(sigma.vec())));
}

double von_mises_strain(const Strain& eps) {
  const Vec6& e = eps.vec();
  const double e11 = 2.0 / 3.0 * e[0] - e[1] / 3.0 - e[2] / 3.0;
  const double e22 = 2.0 / 3.0 * e[1] - e[0] / 3.0 - e[2] / 3.0;
  const double e33 = 2.0 / 3.0 * e[2] - e[0] / 3.0 - e[1] / 3.0;
  const double axial = e11 * e11 + e22 * e22 + e33 * e33;
  const double shear = e[3] * e[3] + e[4] * e[4] + e[5] * e[5];
  return std::sqrt(2.0 / 3.0 * axial + shear / 3.0);
}

}  // namespace incde::mech
