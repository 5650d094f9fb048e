#pragma once

#include <cstdint>
#include <vector>

#include "incde/core/series.hpp"
#include "incde/oracle/plasticity.hpp"

namespace incde::datagen {

struct WalkConfig {
  int n_steps = 100;        // rows per path, including the zero first row
  double inc_max = 0.01;    // per-component |increment| ~ U(0, inc_max)
  int segment_min = 2;      // forced-elastic segment length ~ U{min..max}
  int segment_max = 10;
  int steps_per_segment = 20;  // one forced-elastic segment per this many steps (at least one)
  int max_bisections = 40;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Walk {
  StrainSeries strain;
  std::vector<bool> forced_elastic;  // per row; row 0 is never forced
};

/// Random walk for path `stream` of the generator seeded by cfg.seed.
Walk random_walk(const WalkConfig& cfg, const oracle::OracleParams& material, std::uint64_t stream = 0);

inline StrainSeries random_walk_series(const WalkConfig& cfg, const oracle::OracleParams& material,
                                       std::uint64_t stream = 0) {
  return random_walk(cfg, material, stream).strain;
}

/// Splits every increment into C equal sub-increments. Output has C*T rows;
/// row t*C + c is eps^t + (c/C)(eps^{t+1} - eps^t). The last input row has no
/// successor, so it is held for the final C rows.
StrainSeries partition_series(const StrainSeries& series, int C);

}  // namespace incde::datagen
