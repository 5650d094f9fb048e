#pragma once

#include <cstdint>
#include <vector>

#include "incde/core/series.hpp"
#include "incde/core/voigt.hpp"

namespace incde::experiments {

enum class Shape { monotonic, cyclic };

/// Per-component signed peaks; a component with peak p follows
/// 0 -> p (monotonic) or 0 -> p -> 0 -> -p -> 0 (cyclic).
struct ProtocolSpec {
  Shape shape = Shape::monotonic;
  mech::Vec6 peak = mech::Vec6::Zero();
};

/// Steps of a protocol at base increment ds: floor(0.1 / ds) per segment,
/// one segment (monotonic) or four (cyclic).
int protocol_steps(Shape shape, double base_step);

/// Discretizes with per-component increment ds * |peak| / 0.1 so every
/// component shares the step count. Row 0 is zero strain.
StrainSeries discretize(const ProtocolSpec& spec, double base_step);

/// Exact shape with `per_segment` equal steps per segment; every turning
/// point hits the peak.
StrainSeries discretize_segments(const ProtocolSpec& spec, int per_segment);

/// n protocols with |peak| ~ U(0, 0.1) and random signs per component.
std::vector<ProtocolSpec> sample_protocols(int n, Shape shape, std::uint64_t seed);

/// Single-point protocol shared by the solver-order and increment studies:
/// every component cycles 0 -> p -> 0 -> -p -> 0 with |increment| equal to
/// `component_step`, except eps22 which runs in the opposite direction.
StrainSeries reversal_protocol(double component_step = 0.003, double peak = 0.024);

/// n values log-spaced from lo to hi.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace incde::experiments
