#pragma once

#include <memory>

#include "incde/core/material.hpp"
#include "incde/model/predictor.hpp"

namespace incde::model {

/// Trained predictor as a strain-driven material. State is
/// [Z (H), committed strain (6)]; one call advances one increment from the
/// committed strain to eps_new.
class IncdeMaterial final : public MaterialModel {
 public:
  IncdeMaterial(std::shared_ptr<const IncdeModel> model, SolverConfig solver);

  std::string name() const override;
  std::size_t state_size() const override;
  void init_state(std::span<double> state) const override;
  mech::Stress update(std::span<const double> committed, const mech::Strain& eps_new, std::span<double> trial,
                      mech::Mat6* tangent) const override;

  const IncdeModel& model() const { return *model_; }
  const SolverConfig& solver() const { return solver_; }

 private:
  std::shared_ptr<const IncdeModel> model_;
  SolverConfig solver_;
};

}  // namespace incde::model
