#pragma once

#include <vector>

#include "incde/nn/tape.hpp"

namespace incde::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction; reads p->grad, updates p->value.
class Adam {
 public:
  explicit Adam(std::vector<Parameter*> params, AdamConfig cfg = {});

  void step(double lr);
  long steps() const { return t_; }
  const std::vector<Matrix>& first_moment() const { return m_; }
  const std::vector<Matrix>& second_moment() const { return v_; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig cfg_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
};

/// Piecewise-constant learning rate: rates[k] applies for
/// boundaries[k-1] <= epoch < boundaries[k].
struct StepSchedule {
  std::vector<int> boundaries{100, 200};
  std::vector<double> rates{1e-3, 5e-4, 2.5e-4};

  double at(int epoch) const;
  /// Same rates with every boundary multiplied by `factor`.
  StepSchedule stretched(double factor) const;
  void validate() const;
};

/// Tracks the best test loss; should_stop() once `patience` epochs pass
/// without improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  /// Returns true when `loss` improves on the best seen so far.
  bool update(int epoch, double loss);
  bool should_stop() const { return patience_ > 0 && since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_; }

 private:
  int patience_;
  int since_best_ = 0;
  int best_epoch_ = -1;
  double best_ = 0.0;
};

/// Copies of parameter values, for restoring the best weights.
std::vector<Matrix> snapshot(const std::vector<Parameter*>& params);
void restore(const std::vector<Parameter*>& params, const std::vector<Matrix>& values);

}  // namespace incde::nn
