#include "incde/fem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "incde/core/errors.hpp"

namespace incde::fem {

std::string to_string(IterationMethod m) { return m == IterationMethod::broyden ? "broyden" : "newton"; }

IterationMethod iteration_method_from_string(const std::string& s) {
  if (s == "broyden") return IterationMethod::broyden;
  if (s == "newton") return IterationMethod::newton;
  throw ConfigError("unknown iteration method \"" + s + "\" (expected broyden or newton)");
}

void SolverSettings::validate() const {
  if (!(tau0 > 0.0) || !(taur > 0.0)) throw ConfigError("fe solver: tolerances must be positive");
  if (max_iterations <= 0) throw ConfigError("fe solver: max_iterations must be positive");
  if (max_bisections < 0) throw ConfigError("fe solver: max_bisections must be >= 0");
  if (!(floor_factor >= 0.0)) throw ConfigError("fe solver: floor_factor must be >= 0");
}

double FeProblem::multiplier(int s, double tau) const {
  const auto& v = schedules.at(static_cast<std::size_t>(s));
  const double c = std::clamp(tau, 0.0, static_cast<double>(n_steps()));
  const auto i = static_cast<std::size_t>(std::floor(c));
  if (i >= v.size() - 1) return v.back();
  const double f = c - static_cast<double>(i);
  return f == 0.0 ? v[i] : v[i] + f * (v[i + 1] - v[i]);
}

void FeProblem::validate() const {
  mesh.validate();
  solver.validate();
  if (schedules.empty()) throw ConfigError(name + ": no load schedules");
  for (const auto& s : schedules)
    if (s.size() != schedules.front().size() || s.size() < 2)
      throw ConfigError(name + ": schedules must share a length of at least 2");
  const int nd = mesh.n_dofs();
  std::set<int> seen;
  for (const auto& d : dirichlet) {
    if (d.dof < 0 || d.dof >= nd) throw ConfigError(name + ": Dirichlet DOF out of range");
    if (!seen.insert(d.dof).second) throw ConfigError(name + ": DOF " + std::to_string(d.dof) + " constrained twice");
    if (d.schedule < 0 || d.schedule >= static_cast<int>(schedules.size()))
      throw ConfigError(name + ": Dirichlet schedule out of range");
  }
  for (const auto& p : pressure)
    if (p.schedule < 0 || p.schedule >= static_cast<int>(schedules.size()) || p.edge.n0 < 0 ||
        p.edge.n0 >= mesh.n_nodes() || p.edge.n1 < 0 || p.edge.n1 >= mesh.n_nodes())
      throw ConfigError(name + ": pressure load references an invalid node or schedule");
  for (int d : reaction_dofs)
    if (d < 0 || d >= nd) throw ConfigError(name + ": reaction DOF out of range");
  if (control_dof >= nd) throw ConfigError(name + ": control DOF out of range");
}

}  // namespace incde::fem
