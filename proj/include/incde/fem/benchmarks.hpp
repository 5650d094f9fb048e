#pragma once

#include <string>
#include <vector>

#include "incde/core/json_util.hpp"

#include "incde/fem/problem.hpp"
#include "incde/oracle/plasticity.hpp"

namespace incde::fem {

/// Quarter of a square plate with a central hole (hole centre at the
/// origin). Bottom clamped, left edge on a symmetry plane, top edge driven
/// vertically by d times the protocol 0 -> 1 -> -1 -> 0.
struct PlateOptions {
  double half_width = 60.0;
  double radius = 30.0;
  double d = 6.0;
  int n_circ = 24;          // elements along the quarter hole
  int n_rad = 24;           // elements from the hole to the outer edges
  double grading = 3.0;     // outer/inner radial element size
  int steps_per_unit = 10;  // load steps per unit change of the multiplier
};

/// Quarter coupon: symmetry on x = 0 and y = 0, a half-circle imperfection
/// centred on the x = 0 plane, right edge driven horizontally by d times
/// stretch, unload, compress, unload.
struct CouponOptions {
  double length = 25.0;
  double half_width = 6.0;
  double radius = 1.0;
  double hole_y = 3.0;
  double block = 2.0;  // half size of the structured block around the hole
  double d = 0.9;
  int n_arc = 4;       // elements per 45 degrees of hole
  int n_rad = 4;
  int n_below = 2;
  int n_above = 2;
  int n_right = 20;
  double grading = 2.0;
  int steps_per_phase = 25;
};

/// Half specimen with a central hole, symmetry on x = 0, bottom fixed. Stage
/// one ramps the pressure on the hole and the lateral edge with the top held;
/// stage two drives the top edge vertically to d.
struct ShearOptions {
  double half_width = 25.0;
  double height = 100.0;
  double radius = 5.0;
  double block = 10.0;
  double pressure = 0.6;
  double d = -3.5;
  int n_arc = 4;
  int n_rad = 6;
  int n_below = 12;
  int n_above = 12;
  int n_right = 6;
  double grading = 2.0;
  int pressure_steps = 5;
  int displacement_steps = 40;
};

FeProblem plate_problem(const PlateOptions& o);
FeProblem coupon_problem(const CouponOptions& o);
FeProblem shear_problem(const ShearOptions& o);

/// Benchmark by name ("coupon", "plate", "shear") with options overridden
/// by the keys present in `options` (an object; unknown keys are rejected).
FeProblem benchmark_problem(const std::string& name, const Json& options = Json::object());
/// Oracle material each benchmark is defined with.
oracle::OracleParams benchmark_material(const std::string& name);
const std::vector<std::string>& benchmark_names();

/// Piecewise-linear protocol through `knots`, steps_per_unit steps per unit
/// change of the multiplier (at least one per segment); starts at knots[0].
std::vector<double> piecewise_protocol(const std::vector<double>& knots, int steps_per_unit);

}  // namespace incde::fem
