#pragma once

#include <string>
#include <vector>

#include "incde/fem/mesh.hpp"

namespace incde::fem {

/// u[dof] = value * schedules[schedule][step].
struct DirichletBC {
  int dof = -1;
  double value = 0.0;
  int schedule = 0;
};

/// Uniform pressure (MPa, positive pushes into the body) on a boundary edge,
/// scaled by schedules[schedule][step].
struct PressureLoad {
  BoundaryEdge edge;
  double pressure = 0.0;
  int schedule = 0;
};

enum class IterationMethod { broyden, newton };

std::string to_string(IterationMethod m);
IterationMethod iteration_method_from_string(const std::string& s);

struct SolverSettings {
  IterationMethod method = IterationMethod::broyden;
  double tau0 = 1e-5;        // absolute residual tolerance
  double taur = 1e-5;        // relative to the first residual of the increment
  int max_iterations = 60;
  int max_bisections = 4;
  /// Residuals below floor_factor * ||f_int|| count as converged even when the
  /// relative test cannot be met (round-off level first residuals).
  double floor_factor = 1e-12;

  void validate() const;
};

/// Quasi-static plane-strain boundary value problem, unit thickness.
struct FeProblem {
  std::string name;
  Mesh mesh;
  std::vector<DirichletBC> dirichlet;
  std::vector<PressureLoad> pressure;
  /// Load multipliers; every schedule has n_steps + 1 entries, entry 0 is the
  /// initial state.
  std::vector<std::vector<double>> schedules;
  /// DOFs whose summed reaction is reported against `control_dof`'s value.
  std::vector<int> reaction_dofs;
  int control_dof = -1;
  SolverSettings solver;

  int n_steps() const { return schedules.empty() ? 0 : static_cast<int>(schedules.front().size()) - 1; }
  /// Multiplier of schedule s at fractional step tau (linear between steps).
  double multiplier(int s, double tau) const;
  /// Throws ConfigError on inconsistent definitions (duplicate constrained
  /// DOFs, bad indices, ragged schedules, invalid mesh).
  void validate() const;
};

}  // namespace incde::fem
