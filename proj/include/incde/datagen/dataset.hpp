#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "incde/core/json_util.hpp"
#include "incde/core/series.hpp"
#include "incde/datagen/material_json.hpp"
#include "incde/datagen/random_walk.hpp"

namespace incde::datagen {

/// Flat row-major [sample][step][component] arrays. In decomposed mode
/// `stress` holds the deviator s and `pressure` holds p; otherwise
/// `stress` is the full stress and `pressure` is empty.
struct Dataset {
  int n_samples = 0;
  int n_steps = 0;
  OutputMode mode = OutputMode::full;
  std::vector<double> strain;
  std::vector<double> stress;
  std::vector<double> pressure;
  NormConstants norm;

  int partitions = 1;
  int raw_steps = 0;
  std::uint64_t seed = 0;
  std::string material_name;
  Json material;

  SeriesMatrix strain_series(int i) const;
  /// Full stress, p 1 + s in decomposed mode.
  SeriesMatrix stress_series(int i) const;
  /// n_steps x output_dim normalized targets for sample i.
  Eigen::MatrixXd normalized_targets(int i) const;

  /// Samples [begin, begin + count), norm constants carried over.
  Dataset subset(int begin, int count) const;

  void check_shapes() const;
};

/// Maxima over all samples and steps; throws NumericalError if degenerate.
NormConstants compute_norm_constants(const Dataset& ds);

/// N random walks of cfg.n_steps rows, each partitioned by C and labelled by
/// the oracle. Sample i uses RNG stream i, so the result is independent of
/// the thread count.
Dataset build_dataset(const MaterialPreset& material, int N, const WalkConfig& walk, int C);

void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace incde::datagen
