#include "incde/datagen/normalization.hpp"

#include <cmath>

#include "incde/core/errors.hpp"

namespace incde::datagen {

std::string to_string(OutputMode m) { return m == OutputMode::full ? "full" : "pressure_deviatoric"; }

OutputMode output_mode_from_string(const std::string& s) {
  if (s == "full") return OutputMode::full;
  if (s == "pressure_deviatoric") return OutputMode::pressure_deviatoric;
  throw ConfigError("unknown output mode \"" + s + "\" (expected full or pressure_deviatoric)");
}

mech::Vec6 NormConstants::strain_scale() const {
  mech::Vec6 s;
  for (int k = 0; k < 6; ++k) s[k] = 1.0 / (2.0 * eps_max[k]);
  return s;
}

Eigen::VectorXd NormConstants::output_scale(OutputMode m) const {
  Eigen::VectorXd s(output_dim(m));
  const int off = m == OutputMode::full ? 0 : 1;
  if (off) s[0] = 1.0 / (2.0 * p_max);
  for (int k = 0; k < 3; ++k) s[off + k] = 1.0 / (2.0 * sigma_axial_max);
  for (int k = 3; k < 6; ++k) s[off + k] = 1.0 / (2.0 * sigma_shear_max);
  return s;
}

Eigen::VectorXd NormConstants::normalize_stress(const mech::Vec6& sigma, OutputMode m) const {
  Eigen::VectorXd raw(output_dim(m));
  if (m == OutputMode::full) {
    raw = sigma;
  } else {
    const auto pd = mech::pressure_deviator(mech::Stress(sigma));
    raw[0] = pd.p;
    raw.tail<6>() = pd.s.vec();
  }
  return raw.cwiseProduct(output_scale(m));
}

mech::Vec6 NormConstants::stress_from_output(const Eigen::VectorXd& out, OutputMode m) const {
  return output_jacobian(m) * out;
}

Eigen::MatrixXd NormConstants::output_jacobian(OutputMode m) const {
  const Eigen::VectorXd inv = output_scale(m).cwiseInverse();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, output_dim(m));
  const int off = m == OutputMode::full ? 0 : 1;
  for (int k = 0; k < 6; ++k) J(k, off + k) = inv[off + k];
  if (off)
    for (int k = 0; k < 3; ++k) J(k, 0) = inv[0];
  return J;
}

void NormConstants::validate(OutputMode m) const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  bool good = ok(sigma_axial_max) && ok(sigma_shear_max);
  for (double e : eps_max) good = good && ok(e);
  if (m == OutputMode::pressure_deviatoric) good = good && ok(p_max);
  if (!good) throw NumericalError("degenerate normalization constants (zero or non-finite maxima)");
}

}  // namespace incde::datagen
