#pragma once

#include "incde/core/voigt.hpp"

namespace incde::mech {

struct ElasticParams {
  double E = 50.0;   // MPa
  double nu = 0.3;

  /// Throws ConfigError unless E > 0 and -1 < nu < 0.5.
  void validate() const;

  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double bulk() const { return E / (3.0 * (1.0 - 2.0 * nu)); }
};

/// Isotropic stiffness acting on engineering-shear strain; shear diagonal = mu.
Mat6 elastic_stiffness(const ElasticParams& p);

}  // namespace incde::mech
