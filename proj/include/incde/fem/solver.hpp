#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "incde/fem/assembly.hpp"

namespace incde::fem {

struct StepRecord {
  int step = 0;
  int iterations = 0;     // summed over bisected sub-increments
  int bisections = 0;     // extra sub-increments needed
  double r0 = 0.0;        // first residual norm of the last sub-increment
  double residual = 0.0;  // converged residual norm
  double control_displacement = 0.0;
  double reaction = 0.0;
  double equilibrium_error = 0.0;  // max over directions of |applied + support forces|
};

/// Sherman-Morrison rank-one update of the inverse secant matrix so that the
/// updated matrix maps dr to du. Returns false (leaving Binv unchanged) when
/// the denominator du' Binv dr vanishes.
bool broyden_inverse_update(Eigen::MatrixXd& Binv, const Eigen::VectorXd& du, const Eigen::VectorXd& dr);

/// Incremental-iterative solver holding the converged displacement and the
/// committed material states. Trial states live only inside an increment
/// and are adopted on convergence.
class FeSolver {
 public:
  FeSolver(const FeProblem& problem, const MaterialModel& material);

  /// Advances from the current load level to integer step `step`, halving
  /// the increment on failure up to max_bisections levels deep. Throws
  /// NumericalError naming the step when that is not enough; the committed
  /// state then stays at the last converged sub-increment.
  StepRecord advance(int step);
  StepRecord advance(int step, IterationMethod method);

  double tau() const { return tau_; }
  const Eigen::VectorXd& u() const { return u_; }
  const std::vector<double>& committed() const { return committed_; }
  const Eigen::MatrixXd& stress() const { return stress_; }  // points x 6, last converged
  const Eigen::MatrixXd& strain() const { return strain_; }
  const Assembler& assembler() const { return asm_; }
  int n_free() const { return n_free_; }
  const std::vector<int>& free_index() const { return free_index_; }
  /// FNV-1a hash of the committed state store.
  std::uint64_t state_hash() const;

  struct Snapshot {
    double tau;
    Eigen::VectorXd u;
    std::vector<double> committed;
    Eigen::MatrixXd stress, strain;
  };
  Snapshot snapshot() const { return {tau_, u_, committed_, stress_, strain_}; }
  void restore(const Snapshot& s);

 private:
  struct Attempt {
    bool converged = false;
    int iterations = 0;
    double r0 = 0.0, residual = 0.0;
    std::string failure;
    Eigen::VectorXd u;
    Assembler::Result eval;
  };
  Attempt solve_increment(double target, IterationMethod method) const;
  void bisect(double target, int depth, IterationMethod method, StepRecord& rec);

  FeProblem problem_;  // owned, so the assembler's mesh reference stays valid
  Assembler asm_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
  int n_free_ = 0;
  double tau_ = 0.0;
  Eigen::VectorXd u_;
  std::vector<double> committed_;
  Eigen::MatrixXd stress_, strain_;
};

/// Field histories for every step, entry 0 being the initial state.
struct BvpResult {
  std::string name;
  std::string material;
  std::vector<StepRecord> steps;
  std::vector<Eigen::VectorXd> u;
  std::vector<Eigen::MatrixXd> stress;
  std::vector<Eigen::MatrixXd> strain;
  bool completed = false;
  int failed_step = -1;
  std::string failure;
  double seconds = 0.0;
};

using StepCallback = std::function<void(const StepRecord&)>;

/// Runs every load step; a step failure ends the run with completed = false
/// and the failure message, keeping the history up to the last good step.
BvpResult run_bvp(const FeProblem& problem, const MaterialModel& material, const StepCallback& on_step = {});

}  // namespace incde::fem
