#pragma once

#include <filesystem>
#include <memory>

#include "incde/core/json_util.hpp"
#include "incde/fem/problem.hpp"
#include "incde/model/ode.hpp"
#include "incde/oracle/plasticity.hpp"

namespace incde::fem {

/// Either return-mapping plasticity or a trained checkpoint.
///   {"type": "oracle", "params": {material keys}}
///   {"type": "checkpoint", "path": dir, "method": "midpoint", "dt": 0.5}
struct MaterialSpec {
  enum class Kind { oracle, checkpoint };
  Kind kind = Kind::oracle;
  oracle::OracleParams params = oracle::J2Params{};
  std::filesystem::path checkpoint;
  model::SolverConfig ode{model::Method::midpoint, 0.5};
};

Json material_spec_to_json(const MaterialSpec& m);
/// Relative checkpoint paths are resolved against `base_dir`.
MaterialSpec material_spec_from_json(const Json& j, const std::filesystem::path& base_dir = {});
std::unique_ptr<MaterialModel> make_material(const MaterialSpec& m);

Json solver_settings_to_json(const SolverSettings& s);
SolverSettings solver_settings_from_json(const Json& j);

/// Problem file. Either a benchmark
///   {"benchmark": "plate", "options": {...}}
/// or an explicit definition
///   {"name", "mesh": {"nodes": [[x, y]...], "elements": [[a, b, c, d]...]},
///    "schedules": [[...]...],
///    "dirichlet": [{"nodes": [...], "component": 0|1, "value", "schedule"}...],
///    "pressure": [{"edge": [n0, n1], "pressure", "schedule"}...],
///    "reaction_dofs": [...], "control_dof"}
/// plus optional "material" (defaults to the benchmark's oracle) and "solver".
struct ProblemFile {
  FeProblem problem;
  MaterialSpec material;
};

ProblemFile problem_from_json(const Json& j, const std::filesystem::path& base_dir = {});
ProblemFile load_problem(const std::filesystem::path& path);

}  // namespace incde::fem
