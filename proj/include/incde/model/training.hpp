#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "incde/datagen/dataset.hpp"
#include "incde/model/incde_model.hpp"
#include "incde/nn/adam.hpp"

namespace incde::model {

struct TrainConfig {
  int epochs = 120;
  int batch_size = 128;
  int patience = 30;  // epochs without test improvement; 0 disables early stopping
  nn::StepSchedule schedule{};
  SolverConfig solver{Method::midpoint, 0.2};
  std::uint64_t seed = 0;        // shuffling and the train/test split
  double test_fraction = 0.2;    // 4:1 split

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  int best_epoch = -1;
  double best_test_loss = 0.0;
  double zero_predictor_test_loss = 0.0;
  bool stopped_early = false;
};

/// Normalized sequences of a dataset, one S x 6 strain and one S x d target
/// matrix per sample.
struct SequenceSet {
  std::vector<Matrix> strain;
  std::vector<Matrix> target;

  static SequenceSet from(const datagen::Dataset& ds, const datagen::NormConstants& norm);
  int size() const { return static_cast<int>(strain.size()); }
  int steps() const { return strain.empty() ? 0 : static_cast<int>(strain.front().rows()); }
};

/// Shuffled 4:1-style split of sample indices: {train, test}.
std::pair<std::vector<int>, std::vector<int>> split_indices(int n, double test_fraction, std::uint64_t seed);

/// Mean over samples and steps of the squared norm of the normalized stress
/// error.
double evaluate_mse(const IncdeModel& model, const SequenceSet& data, const SolverConfig& solver,
                    int batch_size = 256);
double zero_predictor_mse(const SequenceSet& data);

/// Loss of the batch `idx`; gradients of that loss are written to the model
/// parameters (previous gradients are overwritten).
double loss_and_gradient(IncdeModel& model, const SequenceSet& data, const std::vector<int>& idx,
                         const SolverConfig& solver);

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train(IncdeModel& model, const SequenceSet& train_set, const SequenceSet& test_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Splits `ds` with cfg.test_fraction and trains on the larger part.
TrainResult train(IncdeModel& model, const datagen::Dataset& ds, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

}  // namespace incde::model
