#include "incde/model/incde_material.hpp"

#include <algorithm>

#include "incde/core/errors.hpp"

namespace incde::model {

IncdeMaterial::IncdeMaterial(std::shared_ptr<const IncdeModel> model, SolverConfig solver)
    : model_(std::move(model)), solver_(solver) {
  if (!model_) throw ConfigError("IncdeMaterial: null model");
  solver_.validate();
}

std::string IncdeMaterial::name() const {
  return "incde(H=" + std::to_string(model_->hidden_size()) + ", " + to_string(solver_.method) +
         ", dt=" + std::to_string(solver_.dt) + ")";
}

std::size_t IncdeMaterial::state_size() const { return static_cast<std::size_t>(model_->hidden_size()) + 6; }

void IncdeMaterial::init_state(std::span<double> state) const {
  if (state.size() != state_size()) throw ConfigError("IncdeMaterial: state has the wrong size");
  std::fill(state.begin(), state.end(), 0.0);
}

mech::Stress IncdeMaterial::update(std::span<const double> committed, const mech::Strain& eps_new,
                                   std::span<double> trial, mech::Mat6* tangent) const {
  const auto H = static_cast<Eigen::Index>(model_->hidden_size());
  if (committed.size() != state_size() || trial.size() != state_size())
    throw ConfigError("IncdeMaterial: state has the wrong size");
  const Eigen::Map<const Eigen::VectorXd> Z(committed.data(), H);
  const Eigen::Map<const mech::Vec6> eps_n(committed.data() + H);
  const StepOutput out = predict_step(*model_, Z, eps_n, eps_new.vec(), solver_, tangent != nullptr);
  Eigen::Map<Eigen::VectorXd>(trial.data(), H) = out.Z;
  Eigen::Map<mech::Vec6>(trial.data() + H) = eps_new.vec();
  if (tangent) *tangent = out.tangent;
  if (!out.sigma.allFinite()) throw NumericalError("IncdeMaterial: non-finite stress");
  return mech::Stress(out.sigma);
}

}  // namespace incde::model
