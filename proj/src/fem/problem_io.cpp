#include "incde/fem/problem_io.hpp"

#include <set>

#include "incde/datagen/material_json.hpp"
#include "incde/fem/benchmarks.hpp"
#include "incde/model/checkpoint.hpp"
#include "incde/model/incde_material.hpp"

namespace incde::fem {

Json material_spec_to_json(const MaterialSpec& m) {
  if (m.kind == MaterialSpec::Kind::oracle) return {{"type", "oracle"}, {"params", datagen::material_to_json(m.params)}};
  return {{"type", "checkpoint"},
          {"path", m.checkpoint.string()},
          {"method", model::to_string(m.ode.method)},
          {"dt", m.ode.dt}};
}

MaterialSpec material_spec_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string ctx = "material";
  MaterialSpec m;
  const auto type = json_require<std::string>(j, "type", ctx);
  if (type == "oracle") {
    m.kind = MaterialSpec::Kind::oracle;
    m.params = datagen::material_from_json(json_require<Json>(j, "params", ctx));
  } else if (type == "checkpoint") {
    m.kind = MaterialSpec::Kind::checkpoint;
    m.checkpoint = json_require<std::string>(j, "path", ctx);
    if (m.checkpoint.is_relative() && !base_dir.empty()) m.checkpoint = base_dir / m.checkpoint;
    m.ode.method = model::method_from_string(json_get_or<std::string>(j, "method", "midpoint", ctx));
    m.ode.dt = json_get_or(j, "dt", 0.5, ctx);
    m.ode.validate();
  } else {
    throw ConfigError("material: unknown type \"" + type + "\" (expected oracle or checkpoint)");
  }
  return m;
}

std::unique_ptr<MaterialModel> make_material(const MaterialSpec& m) {
  if (m.kind == MaterialSpec::Kind::oracle) return std::make_unique<oracle::OracleMaterial>(m.params);
  auto model = std::make_shared<const model::IncdeModel>(model::load_checkpoint(m.checkpoint));
  return std::make_unique<model::IncdeMaterial>(std::move(model), m.ode);
}

Json solver_settings_to_json(const SolverSettings& s) {
  return {{"method", to_string(s.method)},       {"tau0", s.tau0},
          {"taur", s.taur},                      {"max_iterations", s.max_iterations},
          {"max_bisections", s.max_bisections},  {"floor_factor", s.floor_factor}};
}

SolverSettings solver_settings_from_json(const Json& j) {
  const std::string ctx = "solver";
  SolverSettings s;
  s.method = iteration_method_from_string(json_get_or<std::string>(j, "method", to_string(s.method), ctx));
  s.tau0 = json_get_or(j, "tau0", s.tau0, ctx);
  s.taur = json_get_or(j, "taur", s.taur, ctx);
  s.max_iterations = json_get_or(j, "max_iterations", s.max_iterations, ctx);
  s.max_bisections = json_get_or(j, "max_bisections", s.max_bisections, ctx);
  s.floor_factor = json_get_or(j, "floor_factor", s.floor_factor, ctx);
  s.validate();
  return s;
}

namespace {

FeProblem explicit_problem(const Json& j) {
  const std::string ctx = "problem";
  FeProblem p;
  p.name = json_get_or<std::string>(j, "name", "custom", ctx);
  const Json mesh = json_require<Json>(j, "mesh", ctx);
  for (const auto& xy : json_require<std::vector<std::array<double, 2>>>(mesh, "nodes", "problem mesh"))
    p.mesh.nodes.emplace_back(xy[0], xy[1]);
  p.mesh.elements = json_require<std::vector<std::array<int, 4>>>(mesh, "elements", "problem mesh");
  p.mesh.validate();
  p.schedules = json_require<std::vector<std::vector<double>>>(j, "schedules", ctx);

  for (const Json& d : json_require<Json>(j, "dirichlet", ctx)) {
    const int comp = json_require<int>(d, "component", "dirichlet");
    if (comp != 0 && comp != 1) throw ConfigError("dirichlet: component must be 0 or 1");
    const double value = json_get_or(d, "value", 0.0, "dirichlet");
    const int schedule = json_get_or(d, "schedule", 0, "dirichlet");
    for (int n : json_require<std::vector<int>>(d, "nodes", "dirichlet")) {
      if (n < 0 || n >= p.mesh.n_nodes()) throw ConfigError("dirichlet: node index out of range");
      p.dirichlet.push_back({2 * n + comp, value, schedule});
    }
  }

  if (j.contains("pressure")) {
    const auto edges = p.mesh.boundary_edges();
    for (const Json& l : j.at("pressure")) {
      const auto e = json_require<std::array<int, 2>>(l, "edge", "pressure");
      const auto it = std::find_if(edges.begin(), edges.end(), [&](const BoundaryEdge& b) {
        return (b.n0 == e[0] && b.n1 == e[1]) || (b.n0 == e[1] && b.n1 == e[0]);
      });
      if (it == edges.end())
        throw ConfigError("pressure: edge " + std::to_string(e[0]) + "-" + std::to_string(e[1]) +
                          " is not a boundary edge");
      p.pressure.push_back({*it, json_require<double>(l, "pressure", "pressure"), json_get_or(l, "schedule", 0, "pressure")});
    }
  }
  p.reaction_dofs = json_get_or<std::vector<int>>(j, "reaction_dofs", {}, ctx);
  p.control_dof = json_get_or(j, "control_dof", -1, ctx);
  return p;
}

}  // namespace

ProblemFile problem_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("problem: expected a JSON object");
  ProblemFile out;
  if (j.contains("benchmark")) {
    const auto name = json_require<std::string>(j, "benchmark", "problem");
    out.problem = benchmark_problem(name, json_get_or(j, "options", Json::object(), "problem"));
    out.material.params = benchmark_material(name);
  } else {
    out.problem = explicit_problem(j);
  }
  if (j.contains("material")) out.material = material_spec_from_json(j.at("material"), base_dir);
  if (j.contains("solver")) out.problem.solver = solver_settings_from_json(j.at("solver"));
  out.problem.validate();
  return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_json_file(path.string()), path.parent_path());
}

}  // namespace incde::fem
