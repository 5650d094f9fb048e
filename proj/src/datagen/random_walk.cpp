#include "incde/datagen/random_walk.hpp"

#include <algorithm>
#include <string>

#include "incde/core/errors.hpp"
#include "incde/core/rng.hpp"

namespace incde::datagen {

using mech::Strain;
using mech::Vec6;

void WalkConfig::validate() const {
  if (n_steps < 1) throw ConfigError("walk: n_steps must be >= 1");
  if (!(inc_max > 0.0)) throw ConfigError("walk: inc_max must be > 0");
  if (segment_min < 1 || segment_max < segment_min) throw ConfigError("walk: need 1 <= segment_min <= segment_max");
  if (steps_per_segment < 1) throw ConfigError("walk: steps_per_segment must be >= 1");
  if (max_bisections < 0) throw ConfigError("walk: max_bisections must be >= 0");
}

namespace {

// Largest s in (0, 1] with trial_yield(eps + s d) < 0, found by bisection.
// Returns 0 when none is found.
double elastic_scale(const oracle::OracleParams& material, const oracle::OracleState& state, const Vec6& eps,
                     const Vec6& d, int max_bisections) {
  auto f = [&](double s) { return oracle::trial_yield(material, state, Strain(Vec6(eps + s * d))); };
  if (f(1.0) < 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < max_bisections; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return (lo > 0.0 && f(lo) < 0.0) ? lo : 0.0;
}

}  // namespace

Walk random_walk(const WalkConfig& cfg, const oracle::OracleParams& material, std::uint64_t stream) {
  cfg.validate();
  Rng rng(cfg.seed, stream);
  const int T = cfg.n_steps;

  Walk w;
  w.strain = StrainSeries::Zero(T, 6);
  w.forced_elastic.assign(static_cast<std::size_t>(T), false);
  if (T > 1) {
    const int n_seg = std::max(1, T / cfg.steps_per_segment);
    for (int k = 0; k < n_seg; ++k) {
      const auto start = rng.uniform_int(1, T - 1);
      const auto len = rng.uniform_int(cfg.segment_min, cfg.segment_max);
      for (auto t = start; t < std::min<std::int64_t>(T, start + len); ++t) w.forced_elastic[t] = true;
    }
  }

  oracle::OracleState state;
  Vec6 eps = Vec6::Zero();
  for (int t = 1; t < T; ++t) {
    Vec6 d;
    for (int k = 0; k < 6; ++k) {
      const double mag = cfg.inc_max * rng.uniform();
      d[k] = rng.bernoulli() ? mag : -mag;
    }
    if (w.forced_elastic[t]) {
      double s = elastic_scale(material, state, eps, d, cfg.max_bisections);
      if (s == 0.0) {
        d = -d;
        s = elastic_scale(material, state, eps, d, cfg.max_bisections);
      }
      d *= s;
    }
    eps += d;
    state = oracle::return_map(material, state, Strain(eps)).state;
    w.strain.row(t) = eps.transpose();
  }
  return w;
}

StrainSeries partition_series(const StrainSeries& series, int C) {
  if (C <= 0) throw ConfigError("partition_series: C must be >= 1, got " + std::to_string(C));
  const Eigen::Index T = series.rows();
  StrainSeries out(T * C, 6);
  for (Eigen::Index t = 0; t < T; ++t) {
    const bool last = (t + 1 == T);
    for (int c = 0; c < C; ++c) {
      if (last || c == 0) {
        out.row(t * C + c) = series.row(t);
      } else {
        out.row(t * C + c) =
            series.row(t) + (static_cast<double>(c) / C) * (series.row(t + 1) - series.row(t));
      }
    }
  }
  return out;
}

}  // namespace incde::datagen
