#pragma once

// One-dimensional comparison between the incremental model and a plain
// neural CDE on a short bilinear stress-strain record. Both use 10 hidden
// states, two ELU layers of 20, midpoint integration with dt = 1 and a
// bias-free linear readout sigma = W Z.

#include <cstdint>
#include <string>
#include <vector>

#include "incde/nn/adam.hpp"
#include "incde/nn/mlp.hpp"

namespace incde::model {

enum class Kind1d { incde, ncde };

std::string to_string(Kind1d k);

struct Fit1dConfig {
  int hidden = 10;
  int width = 20;
  int layers = 2;
  int epochs = 1500;
  nn::StepSchedule schedule = nn::StepSchedule{}.stretched(5.0);
  std::uint64_t seed = 0;
};

/// Default target: eps = 0, 0.1, ..., 0.5; sigma rises with slope 2 to the
/// kink at 0.2 and with slope 0.2 after it.
std::vector<double> bilinear_strain();
std::vector<double> bilinear_stress();

class Model1d {
 public:
  Model1d(Kind1d kind, const Fit1dConfig& cfg);

  Kind1d kind() const { return kind_; }
  /// Predicted stress at every point of the strain record (starting at 0).
  std::vector<double> predict(const std::vector<double>& eps) const;
  /// Mean squared error over the record; gradients go to parameters().
  double loss_and_gradient(const std::vector<double>& eps, const std::vector<double>& sigma);
  std::vector<nn::Parameter*> parameters();

 private:
  template <class Net>
  nn::Var run(nn::Tape& t, const std::vector<double>& eps, std::vector<nn::Var>& out, Net&& net, nn::Var W) const;

  Kind1d kind_;
  int hidden_;
  nn::Mlp f_;
  nn::Parameter readout_;  // hidden x 1
};

struct Fit1dResult {
  Kind1d kind = Kind1d::incde;
  std::vector<double> loss_history;
  double final_mse = 0.0;
  std::vector<double> prediction;
  std::vector<double> abs_error;
  double max_error = 0.0;
};

Fit1dResult fit_1d(Kind1d kind, const std::vector<double>& eps, const std::vector<double>& sigma,
                   const Fit1dConfig& cfg);

}  // namespace incde::model
