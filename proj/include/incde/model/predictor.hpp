#pragma once

#include <vector>

#include "incde/core/series.hpp"
#include "incde/model/incde_model.hpp"

namespace incde::model {

struct Prediction {
  StressSeries stress;    // physical units
  Eigen::MatrixXd hidden;  // T x H, row t is Z after step t (row 0 is zero)
};

/// Runs the predictor along a physical strain path starting from Z = 0.
Prediction predict_stress_series(const IncdeModel& model, const StrainSeries& series, const SolverConfig& cfg);

/// Same for several equal-length paths, evaluated as one batch.
std::vector<Prediction> predict_batch(const IncdeModel& model, const std::vector<StrainSeries>& series,
                                      const SolverConfig& cfg);

struct StepOutput {
  mech::Vec6 sigma;     // physical stress at eps_next
  Eigen::VectorXd Z;    // hidden state after the step
  mech::Mat6 tangent;   // d sigma / d eps_next (physical units); zero when not requested
};

/// One increment eps_n -> eps_next in physical units.
StepOutput predict_step(const IncdeModel& model, const Eigen::VectorXd& Z_n, const mech::Vec6& eps_n,
                        const mech::Vec6& eps_next, const SolverConfig& cfg, bool with_tangent);

}  // namespace incde::model
