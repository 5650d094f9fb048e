#pragma once

#include <string>

#include "incde/core/json_util.hpp"
#include "incde/datagen/normalization.hpp"
#include "incde/oracle/plasticity.hpp"

namespace incde::datagen {

/// {"model": "j2", E, nu, sigma_y, Hprime, beta_hat} or
/// {"model": "dp", E, nu, sigma_y, phi_deg, psi_deg, Hprime}; omitted
/// numeric keys take the library defaults.
Json material_to_json(const oracle::OracleParams& p);
oracle::OracleParams material_from_json(const Json& j);

Json norm_to_json(const NormConstants& n);
NormConstants norm_from_json(const Json& j, const std::string& context);

struct MaterialPreset {
  std::string name;
  oracle::OracleParams params;
  OutputMode mode = OutputMode::full;
};

/// j2-iso, j2-combined, dp, dp-decomp.
MaterialPreset material_preset(const std::string& name);

}  // namespace incde::datagen
