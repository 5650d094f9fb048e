#pragma once

// Explicit one-step solvers for dZ/dt = N(Z, t) on t in [0, 1].

#include <cmath>
#include <string>
#include <vector>

#include "incde/core/errors.hpp"

namespace incde::model {

enum class Method { euler, midpoint, rk4 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SolverConfig {
  Method method = Method::midpoint;
  double dt = 0.2;

  void validate() const;
  int order() const;
  /// Right-hand-side evaluations per unit interval.
  int rhs_evaluations() const;
};

/// Substep sizes covering [0, 1]: uniform dt, the last one shortened when dt
/// does not divide 1 (within 1e-9 relative it is treated as dividing).
std::vector<double> substep_sizes(double dt);

/// Integrates from t = 0 to 1 with the selected scheme. `rhs(z, t)` returns
/// dZ/dt; `axpy(y, a, x)` returns y + a x. Works for plain matrices and for
/// recorded tape variables alike.
template <class State, class Rhs, class Axpy>
State ode_integrate(State z, const SolverConfig& cfg, const Rhs& rhs, const Axpy& axpy) {
  double t = 0.0;
  for (double h : substep_sizes(cfg.dt)) {
    switch (cfg.method) {
      case Method::euler:
        z = axpy(z, h, rhs(z, t));
        break;
      case Method::midpoint: {
        const State zm = axpy(z, 0.5 * h, rhs(z, t));
        z = axpy(z, h, rhs(zm, t + 0.5 * h));
        break;
      }
      case Method::rk4: {
        const State k1 = rhs(z, t);
        const State k2 = rhs(axpy(z, 0.5 * h, k1), t + 0.5 * h);
        const State k3 = rhs(axpy(z, 0.5 * h, k2), t + 0.5 * h);
        const State k4 = rhs(axpy(z, h, k3), t + h);
        State acc = axpy(z, h / 6.0, k1);
        acc = axpy(acc, h / 3.0, k2);
        acc = axpy(acc, h / 3.0, k3);
        z = axpy(acc, h / 6.0, k4);
        break;
      }
    }
    t += h;
  }
  return z;
}

}  // namespace incde::model
