#pragma once

// Desk-scale settings shared by run-all and the acceptance suite.

#include "incde/datagen/random_walk.hpp"
#include "incde/model/incde_model.hpp"
#include "incde/model/training.hpp"

namespace incde::experiments {

struct DeskSettings {
  int samples = 1000;
  int partitions = 2;
  std::uint64_t data_seed = 1;
  std::uint64_t model_seed = 1;
  datagen::WalkConfig walk{};  // T = 100
  model::Architecture architecture{16, {32, 32, 32}, {32, 32, 32, 32}};
  model::TrainConfig training = default_training();

  static model::TrainConfig default_training() {
    model::TrainConfig t;
    t.epochs = 120;
    t.batch_size = 32;
    t.schedule.rates = {3e-3, 1.5e-3, 7.5e-4};
    return t;
  }
};

inline DeskSettings desk_settings() {
  DeskSettings d;
  d.walk.seed = d.data_seed;
  return d;
}

}  // namespace incde::experiments
