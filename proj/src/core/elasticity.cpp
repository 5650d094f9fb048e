#include "incde/core/elasticity.hpp"

#include <string>

namespace incde::mech {

void ElasticParams::validate() const {
  if (!(E > 0.0) || !std::isfinite(E))
    throw ConfigError("Young's modulus must be positive, got " + std::to_string(E));
  if (!(nu > -1.0 && nu < 0.5))
    throw ConfigError("Poisson's ratio must lie in (-1, 0.5), got " + std::to_string(nu));
}

Mat6 elastic_stiffness(const ElasticParams& p) {
  p.validate();
  const double lam = p.lambda();
  const double mu = p.mu();
  Mat6 C = Mat6::Zero();
  C.topLeftCorner<3, 3>().setConstant(lam);
  for (int i = 0; i < 3; ++i) C(i, i) = lam + 2.0 * mu;
  for (int i = 3; i < 6; ++i) C(i, i) = mu;
  return C;
}

}  // namespace incde::mech
