#include "incde/datagen/material_json.hpp"

namespace incde::datagen {

Json material_to_json(const oracle::OracleParams& p) {
  if (const auto* j2 = std::get_if<oracle::J2Params>(&p)) {
    return {{"model", "j2"},          {"E", j2->elastic.E},         {"nu", j2->elastic.nu},
            {"sigma_y", j2->sigma_y}, {"Hprime", j2->Hprime},       {"beta_hat", j2->beta_hat}};
  }
  const auto& dp = std::get<oracle::DpParams>(p);
  return {{"model", "dp"},          {"E", dp.elastic.E},         {"nu", dp.elastic.nu},  {"sigma_y", dp.sigma_y},
          {"phi_deg", dp.phi_deg},  {"psi_deg", dp.psi_deg},     {"Hprime", dp.Hprime}};
}

oracle::OracleParams material_from_json(const Json& j) {
  const std::string ctx = "material";
  const auto model = json_require<std::string>(j, "model", ctx);
  if (model == "j2") {
    oracle::J2Params p;
    p.elastic.E = json_get_or(j, "E", p.elastic.E, ctx);
    p.elastic.nu = json_get_or(j, "nu", p.elastic.nu, ctx);
    p.sigma_y = json_get_or(j, "sigma_y", p.sigma_y, ctx);
    p.Hprime = json_get_or(j, "Hprime", p.Hprime, ctx);
    p.beta_hat = json_get_or(j, "beta_hat", p.beta_hat, ctx);
    p.validate();
    return p;
  }
  if (model == "dp") {
    oracle::DpParams p;
    p.elastic.E = json_get_or(j, "E", p.elastic.E, ctx);
    p.elastic.nu = json_get_or(j, "nu", p.elastic.nu, ctx);
    p.sigma_y = json_get_or(j, "sigma_y", p.sigma_y, ctx);
    p.phi_deg = json_get_or(j, "phi_deg", p.phi_deg, ctx);
    p.psi_deg = json_get_or(j, "psi_deg", p.psi_deg, ctx);
    p.Hprime = json_get_or(j, "Hprime", p.Hprime, ctx);
    p.validate();
    return p;
  }
  throw ConfigError("material: unknown model \"" + model + "\" (expected j2 or dp)");
}

MaterialPreset material_preset(const std::string& name) {
  if (name == "j2-iso") return {name, oracle::J2Params{}, OutputMode::full};
  if (name == "j2-combined") {
    oracle::J2Params p;
    p.beta_hat = 0.5;
    return {name, p, OutputMode::full};
  }
  if (name == "dp") return {name, oracle::DpParams{}, OutputMode::full};
  if (name == "dp-decomp") return {name, oracle::DpParams{}, OutputMode::pressure_deviatoric};
  throw ConfigError("unknown material \"" + name + "\" (expected j2-iso, j2-combined, dp or dp-decomp)");
}

Json norm_to_json(const NormConstants& n) {
  return {{"sigma_axial_max", n.sigma_axial_max},
          {"sigma_shear_max", n.sigma_shear_max},
          {"eps_max", n.eps_max},
          {"p_max", n.p_max}};
}

NormConstants norm_from_json(const Json& j, const std::string& context) {
  NormConstants n;
  n.sigma_axial_max = json_require<double>(j, "sigma_axial_max", context);
  n.sigma_shear_max = json_require<double>(j, "sigma_shear_max", context);
  n.eps_max = json_require<std::array<double, 6>>(j, "eps_max", context);
  n.p_max = json_require<double>(j, "p_max", context);
  return n;
}

}  // namespace incde::datagen
