#include "incde/experiments/protocols.hpp"

#include <cmath>

#include "incde/core/errors.hpp"
#include "incde/core/rng.hpp"

namespace incde::experiments {

namespace {

int segment_steps(double base_step) {
  if (!(base_step > 0.0) || base_step > 0.1) throw ConfigError("protocol: base step must lie in (0, 0.1]");
  // Tolerate representation error in ratios such as 0.1 / 0.002.
  return static_cast<int>(std::floor(0.1 / base_step * (1.0 + 1e-12)));
}

/// Unit-amplitude shape at fraction k / n of each segment.
double shape_value(Shape s, int step, int per_segment) {
  if (s == Shape::monotonic) return static_cast<double>(step) / per_segment;
  const int seg = step / per_segment;
  const double f = static_cast<double>(step % per_segment) / per_segment;
  switch (seg) {
    case 0: return f;
    case 1: return 1.0 - f;
    case 2: return -f;
    case 3: return -1.0 + f;
    default: return 0.0;
  }
}

}  // namespace

int protocol_steps(Shape shape, double base_step) {
  const int n = segment_steps(base_step);
  return shape == Shape::monotonic ? n : 4 * n;
}

StrainSeries discretize_segments(const ProtocolSpec& spec, int per_segment) {
  if (per_segment < 1) throw ConfigError("protocol: segments need at least one step");
  const int T = spec.shape == Shape::monotonic ? per_segment : 4 * per_segment;
  StrainSeries out(T + 1, 6);
  for (int t = 0; t <= T; ++t) out.row(t) = shape_value(spec.shape, t, per_segment) * spec.peak.transpose();
  return out;
}

StrainSeries discretize(const ProtocolSpec& spec, double base_step) {
  const int per = segment_steps(base_step);
  const int T = protocol_steps(spec.shape, base_step);
  StrainSeries out(T + 1, 6);
  for (int t = 0; t <= T; ++t) {
    // Increment ds * peak / 0.1; the turning point falls short of the peak
    // when ds does not divide 0.1.
    const double amp = base_step / 0.1 * per;
    out.row(t) = (amp * shape_value(spec.shape, t, per)) * spec.peak.transpose();
  }
  return out;
}

std::vector<ProtocolSpec> sample_protocols(int n, Shape shape, std::uint64_t seed) {
  if (n <= 0) throw ConfigError("protocol: sample count must be positive");
  std::vector<ProtocolSpec> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(seed, 0x9e0000 + static_cast<std::uint64_t>(i));
    out[i].shape = shape;
    for (int c = 0; c < 6; ++c) {
      const double mag = rng.uniform(0.0, 0.1);
      out[i].peak(c) = rng.bernoulli() ? mag : -mag;
    }
  }
  return out;
}

StrainSeries reversal_protocol(double component_step, double peak) {
  if (!(component_step > 0.0) || !(peak > 0.0)) throw ConfigError("protocol: step and peak must be positive");
  const double ratio = peak / component_step;
  const int per = static_cast<int>(std::lround(ratio));
  if (per < 1 || std::abs(ratio - per) > 1e-9 * ratio) throw ConfigError("protocol: the step must divide the peak");
  StrainSeries out(4 * per + 1, 6);
  for (int t = 0; t <= 4 * per; ++t) {
    const double v = peak * shape_value(Shape::cyclic, t, per);
    out.row(t).setConstant(v);
    out(t, 1) = -v;
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("log grid: need 0 < lo < hi and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  return out;
}

}  // namespace incde::experiments
