#include "incde/model/ode.hpp"

namespace incde::model {

std::string to_string(Method m) {
  switch (m) {
    case Method::euler: return "euler";
    case Method::midpoint: return "midpoint";
    case Method::rk4: return "rk4";
  }
  return "midpoint";
}

Method method_from_string(const std::string& s) {
  if (s == "euler") return Method::euler;
  if (s == "midpoint") return Method::midpoint;
  if (s == "rk4") return Method::rk4;
  throw ConfigError("unknown solver \"" + s + "\" (expected euler, midpoint or rk4)");
}

void SolverConfig::validate() const {
  if (!(dt > 0.0 && dt <= 1.0)) throw ConfigError("solver dt must lie in (0, 1]");
}

int SolverConfig::order() const {
  switch (method) {
    case Method::euler: return 1;
    case Method::midpoint: return 2;
    case Method::rk4: return 4;
  }
  return 0;
}

int SolverConfig::rhs_evaluations() const {
  const int per = method == Method::euler ? 1 : method == Method::midpoint ? 2 : 4;
  return per * static_cast<int>(substep_sizes(dt).size());
}

std::vector<double> substep_sizes(double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) throw ConfigError("solver dt must lie in (0, 1]");
  const double ratio = 1.0 / dt;
  const double nearest = std::round(ratio);
  std::vector<double> h;
  if (std::abs(ratio - nearest) <= 1e-9 * ratio) {
    h.assign(static_cast<std::size_t>(nearest), 1.0 / nearest);
    return h;
  }
  const auto full = static_cast<std::size_t>(std::floor(ratio));
  h.assign(full, dt);
  h.push_back(1.0 - static_cast<double>(full) * dt);
  return h;
}

}  // namespace incde::model
