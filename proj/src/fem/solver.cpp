#include "incde/fem/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "incde/core/errors.hpp"

namespace incde::fem {

bool broyden_inverse_update(Eigen::MatrixXd& Binv, const Eigen::VectorXd& du, const Eigen::VectorXd& dr) {
  const Eigen::VectorXd Bdr = Binv * dr;
  const double denom = du.dot(Bdr);
  if (!std::isfinite(denom) || std::abs(denom) <= 1e-300) return false;
  const Eigen::RowVectorXd uB = du.transpose() * Binv;
  Binv.noalias() += ((du - Bdr) / denom) * uB;
  return true;
}

FeSolver::FeSolver(const FeProblem& problem, const MaterialModel& material)
    : problem_(problem), asm_(problem_.mesh, material) {
  problem_.validate();
  const int nd = problem_.mesh.n_dofs();
  free_index_.assign(static_cast<std::size_t>(nd), 0);
  for (const auto& d : problem_.dirichlet) free_index_[d.dof] = -1;
  for (int d = 0; d < nd; ++d)
    if (free_index_[d] >= 0) {
      free_index_[d] = n_free_++;
      free_dofs_.push_back(d);
    }
  u_ = Eigen::VectorXd::Zero(nd);
  const std::size_t S = asm_.state_size();
  committed_.assign(static_cast<std::size_t>(asm_.n_points()) * S, 0.0);
  for (int ip = 0; ip < asm_.n_points(); ++ip)
    material.init_state(std::span<double>(committed_.data() + static_cast<std::size_t>(ip) * S, S));
  stress_ = Eigen::MatrixXd::Zero(asm_.n_points(), 6);
  strain_ = Eigen::MatrixXd::Zero(asm_.n_points(), 6);
}

std::uint64_t FeSolver::state_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : committed_) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &v, sizeof(double));
    for (unsigned char c : b) h = (h ^ c) * 1099511628211ULL;
  }
  return h;
}

void FeSolver::restore(const Snapshot& s) {
  tau_ = s.tau;
  u_ = s.u;
  committed_ = s.committed;
  stress_ = s.stress;
  strain_ = s.strain;
}

FeSolver::Attempt FeSolver::solve_increment(double target, IterationMethod method) const {
  const SolverSettings& cfg = problem_.solver;
  Attempt a;
  a.u = u_;
  for (const auto& d : problem_.dirichlet) a.u(d.dof) = d.value * problem_.multiplier(d.schedule, target);
  const Eigen::VectorXd f_ext = external_forces(problem_, target);

  Eigen::MatrixXd Binv;             // Broyden inverse secant matrix
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // Newton factorization
  Eigen::VectorXd r_prev, du_prev;
  for (int i = 0; i < cfg.max_iterations; ++i) {
    const bool tangent = i == 0 || method == IterationMethod::newton;
    try {
      a.eval = asm_.evaluate(a.u, committed_, tangent, free_index_, n_free_);
    } catch (const NumericalError& e) {
      a.failure = e.what();
      return a;
    }
    Eigen::VectorXd r(n_free_);
    for (int k = 0; k < n_free_; ++k) r(k) = a.eval.f_int(free_dofs_[k]) - f_ext(free_dofs_[k]);
    if (!r.allFinite()) {
      a.failure = "non-finite residual";
      return a;
    }
    const double nr = r.norm();
    if (i == 0) a.r0 = nr;
    a.residual = nr;
    a.iterations = i;
    const double floor = cfg.floor_factor * std::max(1.0, a.eval.f_int.norm());
    if (nr <= cfg.tau0 && (nr <= cfg.taur * a.r0 || nr <= floor)) {
      a.converged = true;
      return a;
    }

    Eigen::VectorXd delta;
    if (method == IterationMethod::newton) {
      lu.compute(a.eval.K);
      delta = lu.solve(r);
    } else {
      if (i == 0) {
        Binv = a.eval.K.partialPivLu().inverse();
      } else {
        if (!broyden_inverse_update(Binv, du_prev, r - r_prev)) {
          a.failure = "singular Broyden update";
          return a;
        }
      }
      delta = Binv * r;
    }
    if (!delta.allFinite()) {
      a.failure = "non-finite correction";
      return a;
    }
    for (int k = 0; k < n_free_; ++k) a.u(free_dofs_[k]) -= delta(k);
    r_prev = std::move(r);
    du_prev = -delta;
  }
  a.iterations = cfg.max_iterations;
  a.failure = "no convergence in " + std::to_string(cfg.max_iterations) + " iterations (residual " +
              std::to_string(a.residual) + ")";
  return a;
}

void FeSolver::bisect(double target, int depth, IterationMethod method, StepRecord& rec) {
  Attempt a = solve_increment(target, method);
  rec.iterations += a.iterations;
  if (a.converged) {
    tau_ = target;
    u_ = std::move(a.u);
    committed_ = std::move(a.eval.trial);
    stress_ = std::move(a.eval.stress);
    strain_ = std::move(a.eval.strain);
    rec.r0 = a.r0;
    rec.residual = a.residual;
    return;
  }
  if (depth >= problem_.solver.max_bisections)
    throw NumericalError("load step " + std::to_string(rec.step) + ": " + a.failure + " after " +
                         std::to_string(depth) + " bisections");
  const double mid = 0.5 * (tau_ + target);
  rec.bisections += 1;
  bisect(mid, depth + 1, method, rec);
  bisect(target, depth + 1, method, rec);
}

StepRecord FeSolver::advance(int step) { return advance(step, problem_.solver.method); }

StepRecord FeSolver::advance(int step, IterationMethod method) {
  if (step < 0 || step > problem_.n_steps()) throw ConfigError("load step out of range");
  StepRecord rec;
  rec.step = step;
  bisect(static_cast<double>(step), 0, method, rec);

  // Forces at the converged state: support forces are f_int - f_ext on the
  // constrained DOFs, and all external forces on the body must cancel.
  const Eigen::VectorXd f_ext = external_forces(problem_, tau_);
  const Eigen::VectorXd f_int = asm_.evaluate(u_, committed_, false, free_index_, n_free_).f_int;
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (int d = 0; d < problem_.mesh.n_dofs(); ++d) total(d % 2) += free_index_[d] < 0 ? f_int(d) - f_ext(d) : 0.0;
  for (int d = 0; d < problem_.mesh.n_dofs(); ++d) total(d % 2) += f_ext(d);
  rec.equilibrium_error = total.cwiseAbs().maxCoeff();
  for (int d : problem_.reaction_dofs) rec.reaction += f_int(d) - f_ext(d);
  if (problem_.control_dof >= 0) rec.control_displacement = u_(problem_.control_dof);
  return rec;
}

BvpResult run_bvp(const FeProblem& problem, const MaterialModel& material, const StepCallback& on_step) {
  const auto t0 = std::chrono::steady_clock::now();
  BvpResult out;
  out.name = problem.name;
  out.material = material.name();
  FeSolver solver(problem, material);
  out.u.push_back(solver.u());
  out.stress.push_back(solver.stress());
  out.strain.push_back(solver.strain());
  for (int n = 1; n <= problem.n_steps(); ++n) {
    try {
      const StepRecord rec = solver.advance(n);
      out.steps.push_back(rec);
      out.u.push_back(solver.u());
      out.stress.push_back(solver.stress());
      out.strain.push_back(solver.strain());
      if (on_step) on_step(rec);
    } catch (const NumericalError& e) {
      out.failed_step = n;
      out.failure = e.what();
      break;
    }
  }
  out.completed = out.failed_step < 0;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace incde::fem
