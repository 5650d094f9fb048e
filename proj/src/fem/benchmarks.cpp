#include "incde/fem/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace incde::fem {

namespace {

constexpr double kTol = 1e-7;

std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
  // b starts where a ends.
  a.insert(a.end(), b.begin() + 1, b.end());
  return a;
}

/// Rectangle [0, W] x [0, H] with a circular hole of radius r centred at
/// (0, c) on its left edge, meshed as a structured block [0, a] x [c-a, c+a]
/// around the hole (three arc patches), strips above and below it, and a
/// tensor block to the right whose rows follow every left-side row.
Mesh left_hole_mesh(double W, double H, double r, double c, double a, int n_arc, int n_rad, int n_below,
                    int n_above, int n_right, double grading) {
  if (!(r < a && c - a > 0.0 && c + a < H && a < W)) throw ConfigError("benchmark: hole block does not fit");
  const double pi = std::numbers::pi;
  MeshBuilder b;
  b.add_arc_patch({0.0, c}, r, -pi / 2, -pi / 4, {0.0, c - a}, {a, c - a}, n_arc, n_rad, grading);
  b.add_arc_patch({0.0, c}, r, -pi / 4, pi / 4, {a, c - a}, {a, c + a}, 2 * n_arc, n_rad, grading);
  b.add_arc_patch({0.0, c}, r, pi / 4, pi / 2, {a, c + a}, {0.0, c + a}, n_arc, n_rad, grading);
  const std::vector<double> xs = linspace(0.0, a, n_arc);
  const std::vector<double> below = linspace(0.0, c - a, n_below);
  const std::vector<double> above = linspace(c + a, H, n_above);
  b.add_rect(xs, below);
  b.add_rect(xs, above);
  const std::vector<double> ys = concat(concat(below, linspace(c - a, c + a, 2 * n_arc)), above);
  b.add_rect(linspace(a, W, n_right), ys);
  return b.build();
}

bool near(double x, double y) { return std::abs(x - y) <= kTol; }

void constrain(FeProblem& p, const std::vector<int>& nodes, int comp, double value, int schedule) {
  std::set<int> taken;
  for (const auto& d : p.dirichlet) taken.insert(d.dof);
  for (int n : nodes) {
    const int dof = 2 * n + comp;
    if (taken.insert(dof).second) p.dirichlet.push_back({dof, value, schedule});
  }
}

std::vector<int> dofs_of(const std::vector<int>& nodes, int comp) {
  std::vector<int> out;
  for (int n : nodes) out.push_back(2 * n + comp);
  return out;
}

int corner_node(const Mesh& m, double x, double y) {
  const auto nodes = m.nodes_where([&](const Point& q) { return near(q.x(), x) && near(q.y(), y); });
  if (nodes.size() != 1) throw ConfigError("benchmark: corner node not found");
  return nodes.front();
}

void positive(int v, const char* what) {
  if (v <= 0) throw ConfigError(std::string("benchmark: ") + what + " must be positive");
}

}  // namespace

std::vector<double> piecewise_protocol(const std::vector<double>& knots, int steps_per_unit) {
  positive(steps_per_unit, "steps per unit");
  if (knots.empty()) throw ConfigError("protocol: no knots");
  std::vector<double> out{knots.front()};
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double span = knots[k] - knots[k - 1];
    const int n = std::max(1, static_cast<int>(std::lround(std::abs(span) * steps_per_unit)));
    for (int s = 1; s <= n; ++s) out.push_back(knots[k - 1] + span * s / n);
  }
  return out;
}

FeProblem plate_problem(const PlateOptions& o) {
  positive(o.n_circ, "n_circ");
  positive(o.n_rad, "n_rad");
  if (o.n_circ % 2 != 0) throw ConfigError("benchmark: plate n_circ must be even");
  if (!(o.radius > 0.0 && o.radius < o.half_width)) throw ConfigError("benchmark: plate hole must fit");
  const double pi = std::numbers::pi, L = o.half_width;
  MeshBuilder b;
  b.add_arc_patch({0.0, 0.0}, o.radius, 0.0, pi / 4, {L, 0.0}, {L, L}, o.n_circ / 2, o.n_rad, o.grading);
  b.add_arc_patch({0.0, 0.0}, o.radius, pi / 4, pi / 2, {L, L}, {0.0, L}, o.n_circ / 2, o.n_rad, o.grading);

  FeProblem p;
  p.name = "plate";
  p.mesh = b.build();
  p.schedules.push_back(piecewise_protocol({0.0, 1.0, -1.0, 0.0}, o.steps_per_unit));

  const auto bottom = p.mesh.nodes_where([](const Point& q) { return near(q.y(), 0.0); });
  const auto left = p.mesh.nodes_where([](const Point& q) { return near(q.x(), 0.0); });
  const auto top = p.mesh.nodes_where([&](const Point& q) { return near(q.y(), L); });
  constrain(p, bottom, 0, 0.0, 0);
  constrain(p, bottom, 1, 0.0, 0);
  constrain(p, top, 1, o.d, 0);
  constrain(p, left, 0, 0.0, 0);
  p.reaction_dofs = dofs_of(top, 1);
  p.control_dof = 2 * corner_node(p.mesh, 0.0, L) + 1;
  p.validate();
  return p;
}

FeProblem coupon_problem(const CouponOptions& o) {
  for (int v : {o.n_arc, o.n_rad, o.n_below, o.n_above, o.n_right, o.steps_per_phase}) positive(v, "element/step count");
  FeProblem p;
  p.name = "coupon";
  p.mesh = left_hole_mesh(o.length, o.half_width, o.radius, o.hole_y, o.block, o.n_arc, o.n_rad, o.n_below,
                          o.n_above, o.n_right, o.grading);
  p.schedules.push_back(piecewise_protocol({0.0, 1.0, 0.0, -1.0, 0.0}, o.steps_per_phase));
  const auto left = p.mesh.nodes_where([](const Point& q) { return near(q.x(), 0.0); });
  const auto bottom = p.mesh.nodes_where([](const Point& q) { return near(q.y(), 0.0); });
  const auto right = p.mesh.nodes_where([&](const Point& q) { return near(q.x(), o.length); });
  constrain(p, left, 0, 0.0, 0);
  constrain(p, bottom, 1, 0.0, 0);
  constrain(p, right, 0, o.d, 0);
  p.reaction_dofs = dofs_of(right, 0);
  p.control_dof = 2 * corner_node(p.mesh, o.length, 0.0);
  p.validate();
  return p;
}

FeProblem shear_problem(const ShearOptions& o) {
  for (int v : {o.n_arc, o.n_rad, o.n_below, o.n_above, o.n_right, o.pressure_steps, o.displacement_steps})
    positive(v, "element/step count");
  const double W = o.half_width, H = o.height, c = 0.5 * H;
  FeProblem p;
  p.name = "shear";
  p.mesh = left_hole_mesh(W, H, o.radius, c, o.block, o.n_arc, o.n_rad, o.n_below, o.n_above, o.n_right, o.grading);

  // Schedule 0 drives the pressure, schedule 1 the top displacement.
  const int n = o.pressure_steps + o.displacement_steps;
  std::vector<double> pres(n + 1, 1.0), disp(n + 1, 0.0);
  for (int s = 0; s <= o.pressure_steps; ++s) pres[s] = static_cast<double>(s) / o.pressure_steps;
  for (int s = 1; s <= o.displacement_steps; ++s) disp[o.pressure_steps + s] = static_cast<double>(s) / o.displacement_steps;
  p.schedules = {pres, disp};

  const auto left = p.mesh.nodes_where([](const Point& q) { return near(q.x(), 0.0); });
  const auto bottom = p.mesh.nodes_where([](const Point& q) { return near(q.y(), 0.0); });
  const auto top = p.mesh.nodes_where([&](const Point& q) { return near(q.y(), H); });
  constrain(p, bottom, 0, 0.0, 1);
  constrain(p, bottom, 1, 0.0, 1);
  constrain(p, left, 0, 0.0, 1);
  constrain(p, top, 1, o.d, 1);
  const Point centre(0.0, c);
  for (const BoundaryEdge& e : p.mesh.boundary_edges()) {
    const Point& a = p.mesh.nodes[e.n0];
    const Point& b = p.mesh.nodes[e.n1];
    const bool on_hole = near((a - centre).norm(), o.radius) && near((b - centre).norm(), o.radius);
    const bool on_side = near(a.x(), W) && near(b.x(), W);
    if (on_hole || on_side) p.pressure.push_back({e, o.pressure, 0});
  }
  p.reaction_dofs = dofs_of(top, 1);
  p.control_dof = 2 * corner_node(p.mesh, 0.0, H) + 1;
  p.validate();
  return p;
}

namespace {

template <class T>
void take(const Json& j, const char* key, T& field, std::set<std::string>& used) {
  if (j.contains(key)) {
    field = json_require<T>(j, key, "benchmark options");
    used.insert(key);
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& used) {
  for (const auto& [k, v] : j.items())
    if (!used.count(k)) throw ConfigError("benchmark options: unknown key \"" + k + "\"");
}

}  // namespace

FeProblem benchmark_problem(const std::string& name, const Json& j) {
  if (!j.is_object()) throw ConfigError("benchmark options must be an object");
  std::set<std::string> used;
  if (name == "plate") {
    PlateOptions o;
    take(j, "half_width", o.half_width, used);
    take(j, "radius", o.radius, used);
    take(j, "d", o.d, used);
    take(j, "n_circ", o.n_circ, used);
    take(j, "n_rad", o.n_rad, used);
    take(j, "grading", o.grading, used);
    take(j, "steps_per_unit", o.steps_per_unit, used);
    reject_unknown(j, used);
    return plate_problem(o);
  }
  if (name == "coupon") {
    CouponOptions o;
    take(j, "length", o.length, used);
    take(j, "half_width", o.half_width, used);
    take(j, "radius", o.radius, used);
    take(j, "hole_y", o.hole_y, used);
    take(j, "block", o.block, used);
    take(j, "d", o.d, used);
    take(j, "n_arc", o.n_arc, used);
    take(j, "n_rad", o.n_rad, used);
    take(j, "n_below", o.n_below, used);
    take(j, "n_above", o.n_above, used);
    take(j, "n_right", o.n_right, used);
    take(j, "grading", o.grading, used);
    take(j, "steps_per_phase", o.steps_per_phase, used);
    reject_unknown(j, used);
    return coupon_problem(o);
  }
  if (name == "shear") {
    ShearOptions o;
    take(j, "half_width", o.half_width, used);
    take(j, "height", o.height, used);
    take(j, "radius", o.radius, used);
    take(j, "block", o.block, used);
    take(j, "pressure", o.pressure, used);
    take(j, "d", o.d, used);
    take(j, "n_arc", o.n_arc, used);
    take(j, "n_rad", o.n_rad, used);
    take(j, "n_below", o.n_below, used);
    take(j, "n_above", o.n_above, used);
    take(j, "n_right", o.n_right, used);
    take(j, "grading", o.grading, used);
    take(j, "pressure_steps", o.pressure_steps, used);
    take(j, "displacement_steps", o.displacement_steps, used);
    reject_unknown(j, used);
    return shear_problem(o);
  }
  throw ConfigError("unknown benchmark \"" + name + "\" (expected coupon, plate or shear)");
}

oracle::OracleParams benchmark_material(const std::string& name) {
  if (name == "plate" || name == "coupon") return oracle::J2Params{};
  if (name == "shear") return oracle::DpParams{};
  throw ConfigError("unknown benchmark \"" + name + "\" (expected coupon, plate or shear)");
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"coupon", "plate", "shear"};
  return names;
}

}  // namespace incde::fem
