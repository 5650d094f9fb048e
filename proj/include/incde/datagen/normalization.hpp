#pragma once

// Linear scaling into the training space: every strain component and every
// stress output is divided by twice its dataset-wide maximum magnitude, so
// normalized data lies in [-0.5, 0.5]. Axial stress components share one
// constant and shear components another.

#include <array>
#include <string>

#include <Eigen/Dense>

#include "incde/core/voigt.hpp"

namespace incde::datagen {

enum class OutputMode { full, pressure_deviatoric };

std::string to_string(OutputMode m);
OutputMode output_mode_from_string(const std::string& s);

/// 6 for full stress, 7 for [p, s11, s22, s33, s23, s13, s12].
inline int output_dim(OutputMode m) { return m == OutputMode::full ? 6 : 7; }

struct NormConstants {
  double sigma_axial_max = 1.0;  // of sigma (full) or of the deviator s (decomposed)
  double sigma_shear_max = 1.0;
  std::array<double, 6> eps_max{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double p_max = 1.0;

  /// Multipliers taking physical strain to normalized strain.
  mech::Vec6 strain_scale() const;
  /// Multipliers taking physical outputs to normalized outputs.
  Eigen::VectorXd output_scale(OutputMode m) const;

  mech::Vec6 normalize_strain(const mech::Vec6& eps) const { return strain_scale().cwiseProduct(eps); }
  mech::Vec6 denormalize_strain(const mech::Vec6& e) const { return e.cwiseQuotient(strain_scale()); }

  /// Normalized model output for a physical stress.
  Eigen::VectorXd normalize_stress(const mech::Vec6& sigma, OutputMode m) const;
  /// Physical stress from a normalized model output.
  mech::Vec6 stress_from_output(const Eigen::VectorXd& out, OutputMode m) const;
  /// d(sigma)/d(normalized output), 6 x output_dim.
  Eigen::MatrixXd output_jacobian(OutputMode m) const;

  void validate(OutputMode m) const;
};

}  // namespace incde::datagen
