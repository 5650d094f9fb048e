#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <vector>

#include "incde/core/json_util.hpp"
#include "incde/experiments/protocols.hpp"
#include "incde/model/predictor.hpp"
#include "incde/oracle/plasticity.hpp"

namespace incde::experiments {

/// predict_batch over equal-length paths, split across the worker pool.
std::vector<model::Prediction> predict_parallel(const model::IncdeModel& m, const std::vector<StrainSeries>& paths,
                                                const model::SolverConfig& cfg);

/// Maps equal-length strain paths to predictions; lets the oracle stand in
/// for a surrogate (its hidden state is then empty).
using BatchPredictor = std::function<std::vector<model::Prediction>(const std::vector<StrainSeries>&)>;

BatchPredictor model_predictor(const model::IncdeModel& m, const model::SolverConfig& cfg);
BatchPredictor oracle_predictor(const oracle::OracleParams& p);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- increment-size study ----------------------------------------------

struct Example1Config {
  int n_protocols = 128;
  std::vector<double> base_steps = log_grid(6e-4, 7e-3, 40);
  /// Hidden-state refinement grid; the first entry is the reference.
  std::vector<double> z_steps{2e-4, 4e-4, 8e-4, 1.6e-3, 3.2e-3};
  int n_z_protocols = 300;
  model::SolverConfig solver{model::Method::midpoint, 0.2};  // used by the model overload
  std::uint64_t seed = 2024;
  int histogram_bins = 50;
};

struct Example1Row {
  double base_step = 0.0;
  int steps_monotonic = 0, steps_cyclic = 0;
  // ||sigma_hat - sigma_ref|| / (N T) over the selected components and sets.
  double e_axial = 0.0, e_shear = 0.0, e_monotonic = 0.0, e_cyclic = 0.0, e_all = 0.0;
};

struct Example1Result {
  std::vector<Example1Row> rows;
  std::vector<double> z_steps;       // refinement grid without the reference
  std::vector<double> z_errors;      // mean ||Z_end - Z_ref,end|| per entry
  std::vector<double> hist_edges;    // bins over [-1, 1]
  std::vector<long> hist_counts;
  double z_min = 0.0, z_max = 0.0;
  long z_outside = 0;                // values with |Z| >= 1
};

Example1Result example1(const BatchPredictor& predict, const oracle::OracleParams& truth, const Example1Config& cfg);
Example1Result example1(const model::IncdeModel& m, const oracle::OracleParams& truth, const Example1Config& cfg);
Json write_example1(const Example1Result& r, const std::filesystem::path& dir);

// ---- solver-order and increment study ----------------------------------

struct Example2Config {
  double component_step = 0.003;
  double peak = 0.024;
  std::vector<double> dts{0.03, 0.125, 0.25, 0.5, 1.0};
  std::vector<model::Method> methods{model::Method::euler, model::Method::midpoint, model::Method::rk4};
  model::SolverConfig reference{model::Method::rk4, 0.1};
  /// Per-component increments; ||d eps|| is sqrt(6) times these. The
  /// reference sits well below the finest entry: a first-order error measured
  /// against a reference only twice finer scales like (h - h_ref), which
  /// biases the fitted slope upwards.
  std::vector<double> increment_steps{8e-4, 4e-4, 2e-4, 1e-4, 5e-5};
  double increment_reference = 6.25e-6;
  model::SolverConfig increment_solver{model::Method::rk4, 0.1};
};

struct SolverRow {
  model::Method method = model::Method::euler;
  double dt = 0.0;
  double error_truth = 0.0;  // ||sigma_hat - sigma_oracle||, NaN without an oracle
  double error_z = 0.0;      // against the reference solver
  double error_sigma = 0.0;
};

struct IncrementRow {
  double component_step = 0.0;
  double increment_norm = 0.0;
  double error_z = 0.0;  // at the points of the coarsest path
  double error_sigma = 0.0;
};

struct Example2Result {
  std::vector<SolverRow> solver_rows;
  std::vector<IncrementRow> increment_rows;
  /// Slopes indexed like Example2Config::methods.
  std::vector<double> slope_z, slope_sigma;
  double increment_slope_z = 0.0, increment_slope_sigma = 0.0;
};

/// dt refinement for every method; fills solver_rows and the dt slopes.
/// `truth` may be null (untrained models); then error_truth is NaN.
void solver_study(const model::IncdeModel& m, const oracle::OracleParams* truth, const Example2Config& cfg,
                  Example2Result& out);
/// Strain-increment refinement; fills increment_rows and their slopes.
void increment_study(const model::IncdeModel& m, const Example2Config& cfg, Example2Result& out);

/// Both studies.
Example2Result example2(const model::IncdeModel& m, const oracle::OracleParams* truth, const Example2Config& cfg);
Json write_example2(const Example2Result& r, const std::filesystem::path& dir);

// ---- combined-hardening comparison -------------------------------------

/// Von Mises stress at the last elastic step before the response first
/// departs from the elastic stiffness, searching from step `from`. Departure
/// means ||d sigma - C d eps|| > tol ||C d eps||. NaN if it never departs.
double first_yield_von_mises(const StrainSeries& strain, const StressSeries& stress, const mech::Mat6& C, int from,
                             double tol = 0.05);

struct Example3Result {
  StrainSeries strain;
  StressSeries surrogate, oracle;
  std::array<double, 6> rmse{};
  double sigma_y = 0.0;
  // Initial yield on loading and yield after the first reversal.
  double oracle_forward_yield = 0.0, oracle_reverse_yield = 0.0;
  double surrogate_forward_yield = 0.0, surrogate_reverse_yield = 0.0;
};

Example3Result example3(const model::IncdeModel& m, const oracle::OracleParams& truth,
                        const model::SolverConfig& solver = {model::Method::rk4, 0.1},
                        const Example2Config& protocol = {});
Json write_example3(const Example3Result& r, const std::filesystem::path& dir);

}  // namespace incde::experiments
