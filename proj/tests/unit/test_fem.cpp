#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "incde/core/elasticity.hpp"
#include "incde/core/rng.hpp"
#include "incde/fem/benchmarks.hpp"
#include "incde/fem/problem_io.hpp"
#include "incde/fem/report.hpp"
#include "incde/fem/solver.hpp"

using namespace incde;
using namespace incde::fem;

namespace {

oracle::J2Params elastic_j2() {
  oracle::J2Params p;
  p.sigma_y = 1e9;
  return p;
}

double mesh_area(const Mesh& m) {
  double a = 0.0;
  for (const auto& e : m.elements)
    for (int k = 0; k < 4; ++k) {
      const Point& p = m.nodes[e[k]];
      const Point& q = m.nodes[e[(k + 1) % 4]];
      a += 0.5 * (p.x() * q.y() - q.x() * p.y());
    }
  return a;
}

/// Area of a regular polygonal approximation of a circular sector with n chords.
double sector_polygon(double r, double angle, int n) { return n * 0.5 * r * r * std::sin(angle / n); }

/// Unit square [0, 1]^2 meshed by one element.
Mesh unit_element() {
  MeshBuilder b;
  b.add_rect({0.0, 1.0}, {0.0, 1.0});
  return b.build();
}

std::vector<int> all_free(int n_dofs, const FeProblem& p, int& n_free) {
  std::vector<int> idx(static_cast<std::size_t>(n_dofs), 0);
  for (const auto& d : p.dirichlet) idx[d.dof] = -1;
  n_free = 0;
  for (int& v : idx)
    if (v >= 0) v = n_free++;
  return idx;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("incde_fem_" + name);
  std::filesystem::remove_all(p);
  return p;
}

/// Single element stretched horizontally into the plastic range: left edge
/// fixed in x, bottom-left corner fixed in y.
FeProblem one_element_stretch(double d, int steps) {
  FeProblem p;
  p.name = "one-element";
  p.mesh = unit_element();
  p.schedules = {piecewise_protocol({0.0, 1.0}, steps)};
  for (int n = 0; n < 4; ++n) {
    const Point& x = p.mesh.nodes[n];
    if (x.x() == 0.0) p.dirichlet.push_back({2 * n, 0.0, 0});
    if (x.x() == 0.0 && x.y() == 0.0) p.dirichlet.push_back({2 * n + 1, 0.0, 0});
    if (x.x() == 1.0) {
      p.dirichlet.push_back({2 * n, d, 0});
      p.reaction_dofs.push_back(2 * n);
      p.control_dof = 2 * n;
    }
  }
  return p;
}

/// Elastic material that refuses increments longer than `limit` from its
/// committed strain, standing in for a surrogate that fails on large steps.
class StrideLimitedElastic final : public MaterialModel {
 public:
  explicit StrideLimitedElastic(double limit) : limit_(limit), C_(mech::elastic_stiffness({})) {}
  std::string name() const override { return "stride-limited"; }
  std::size_t state_size() const override { return 6; }
  void init_state(std::span<double> s) const override { std::fill(s.begin(), s.end(), 0.0); }
  mech::Stress update(std::span<const double> committed, const mech::Strain& eps, std::span<double> trial,
                      mech::Mat6* tangent) const override {
    const Eigen::Map<const mech::Vec6> prev(committed.data());
    if ((eps.vec() - prev).norm() > limit_) throw NumericalError("stride too long");
    Eigen::Map<mech::Vec6>(trial.data()) = eps.vec();
    if (tangent) *tangent = C_;
    return mech::Stress(C_ * eps.vec());
  }

 private:
  double limit_;
  mech::Mat6 C_;
};

}  // namespace

TEST_SUITE("fem") {
  TEST_CASE("graded spacing hits its ratio and end points") {
    const auto g = graded(2.0, 5.0, 4, 8.0);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 2.0);
    CHECK(g.back() == 5.0);
    CHECK((g[4] - g[3]) / (g[1] - g[0]) == doctest::Approx(8.0).epsilon(1e-12));
    const auto l = linspace(0.0, 1.0, 4);
    CHECK(l[2] == doctest::Approx(0.5));
  }

  TEST_CASE("benchmark meshes cover the expected areas") {
    const double pi = std::numbers::pi;
    PlateOptions po;
    po.n_circ = 12;
    po.n_rad = 6;
    const FeProblem plate = plate_problem(po);
    CHECK(plate.mesh.n_nodes() == (po.n_circ + 1) * (po.n_rad + 1));
    CHECK(plate.mesh.n_elements() == po.n_circ * po.n_rad);
    CHECK(mesh_area(plate.mesh) == doctest::Approx(60.0 * 60.0 - sector_polygon(30.0, pi / 2, 12)).epsilon(1e-12));

    const CouponOptions co;
    const FeProblem coupon = coupon_problem(co);
    CHECK(mesh_area(coupon.mesh) ==
          doctest::Approx(25.0 * 6.0 - sector_polygon(1.0, pi, 4 * co.n_arc)).epsilon(1e-12));
    CHECK(coupon.n_steps() == 100);

    const ShearOptions so;
    const FeProblem shear = shear_problem(so);
    CHECK(mesh_area(shear.mesh) ==
          doctest::Approx(25.0 * 100.0 - sector_polygon(5.0, pi, 4 * so.n_arc)).epsilon(1e-12));
    CHECK(shear.n_steps() == 45);
    CHECK(shear.multiplier(1, 45.0) == 1.0);
    CHECK(shear.multiplier(1, 5.0) == 0.0);
    CHECK(shear.multiplier(0, 2.5) == doctest::Approx(0.5));

    // Every boundary edge of a conforming mesh lies on the outer contour.
    CHECK(plate.mesh.boundary_edges().size() == static_cast<std::size_t>(2 * (po.n_circ + po.n_rad)));
  }

  TEST_CASE("plate schedule follows the load-unload-reverse protocol") {
    PlateOptions o;
    o.n_circ = 4;
    o.n_rad = 2;
    o.steps_per_unit = 5;
    const FeProblem p = plate_problem(o);
    REQUIRE(p.n_steps() == 20);
    const auto& s = p.schedules[0];
    CHECK(s[5] == doctest::Approx(1.0));
    CHECK(s[15] == doctest::Approx(-1.0));
    CHECK(s[20] == doctest::Approx(0.0));
    for (int k = 1; k <= 20; ++k) CHECK(std::abs(s[k] - s[k - 1]) == doctest::Approx(0.2));
  }

  TEST_CASE("shear pressure resultant balances projected lengths") {
    const ShearOptions o;
    const FeProblem p = shear_problem(o);
    const Eigen::VectorXd f = external_forces(p, 5.0);
    double fx = 0.0, fy = 0.0;
    for (int n = 0; n < p.mesh.n_nodes(); ++n) {
      fx += f(2 * n);
      fy += f(2 * n + 1);
    }
    // Hole pushes the body towards +x over its chord 2r, the lateral edge towards -x over H.
    CHECK(fx == doctest::Approx(o.pressure * (2.0 * o.radius - o.height)).epsilon(1e-12));
    CHECK(std::abs(fy) < 1e-12);
  }

  TEST_CASE("zero displacement gives zero internal force") {
    const FeProblem p = plate_problem({});
    const oracle::OracleMaterial mat(oracle::J2Params{});
    const Assembler a(p.mesh, mat);
    std::vector<double> states(static_cast<std::size_t>(a.n_points()) * a.state_size(), 0.0);
    int n_free = 0;
    const auto idx = all_free(p.mesh.n_dofs(), p, n_free);
    const auto r = a.evaluate(Eigen::VectorXd::Zero(p.mesh.n_dofs()), states, false, idx, n_free);
    CHECK(r.f_int.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("patch test: linear displacement on a distorted patch gives constant stress") {
    // 2 x 2 patch on [0, 2]^2 with a displaced interior node and distorted edge nodes.
    const std::vector<Point> grid{{0.0, 0.0}, {0.9, 0.0}, {2.0, 0.0}, {0.0, 1.2}, {1.15, 0.85},
                                  {2.0, 1.1}, {0.0, 2.0}, {1.2, 2.0}, {2.0, 2.0}};
    MeshBuilder b;
    b.add_grid(grid, 2, 2);
    FeProblem p;
    p.name = "patch";
    p.mesh = b.build();
    p.schedules = {{0.0, 1.0}};
    // u = A x + c with a general in-plane gradient.
    Eigen::Matrix2d A;
    A << 1.0e-3, -4.0e-4, 7.0e-4, -2.0e-4;
    const Eigen::Vector2d c(1e-4, -3e-4);
    int centre = -1;
    for (int n = 0; n < p.mesh.n_nodes(); ++n) {
      if ((p.mesh.nodes[n] - Point(1.15, 0.85)).norm() < 1e-12) {
        centre = n;
        continue;
      }
      const Eigen::Vector2d u = A * p.mesh.nodes[n] + c;
      p.dirichlet.push_back({2 * n, u.x(), 0});
      p.dirichlet.push_back({2 * n + 1, u.y(), 0});
    }
    REQUIRE(centre >= 0);
    const oracle::OracleMaterial mat(elastic_j2());
    FeSolver s(p, mat);
    s.advance(1);

    mech::Vec6 eps = mech::Vec6::Zero();
    eps(0) = A(0, 0);
    eps(1) = A(1, 1);
    eps(5) = A(0, 1) + A(1, 0);
    const mech::Vec6 sig = mech::elastic_stiffness(elastic_j2().elastic) * eps;
    const Eigen::Vector2d uc = A * p.mesh.nodes[centre] + c;
    CHECK((s.u().segment<2>(2 * centre) - uc).norm() <= 1e-10 * uc.norm());
    double worst = 0.0;
    for (int q = 0; q < s.stress().rows(); ++q)
      worst = std::max(worst, (s.stress().row(q).transpose() - sig).norm() / sig.norm());
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("single element in uniaxial strain reacts with (lambda + 2 mu) eps") {
    FeProblem p;
    p.name = "uniaxial";
    p.mesh = unit_element();
    p.schedules = {{0.0, 1.0}};
    const double eps = 1e-3;
    for (int n = 0; n < 4; ++n) {
      const Point& x = p.mesh.nodes[n];
      p.dirichlet.push_back({2 * n, x.x() * eps, 0});
      p.dirichlet.push_back({2 * n + 1, 0.0, 0});
      if (x.x() == 1.0) p.reaction_dofs.push_back(2 * n);
    }
    const oracle::OracleMaterial mat(elastic_j2());
    FeSolver s(p, mat);
    const StepRecord r = s.advance(1);
    const mech::ElasticParams e = elastic_j2().elastic;
    CHECK(r.reaction == doctest::Approx((e.lambda() + 2.0 * e.mu()) * eps * 1.0).epsilon(1e-12));
  }

  TEST_CASE("assembled tangent matches finite differences of the internal force") {
    // Pre-strained plastic state so the tangent is elastoplastic.
    FeProblem p = one_element_stretch(0.05, 1);
    const oracle::OracleMaterial mat(oracle::J2Params{});
    FeSolver s(p, mat);
    s.advance(1);
    std::vector<int> idx(8, 0);
    for (int d = 0; d < 8; ++d) idx[d] = d;
    const Assembler& a = s.assembler();
    Eigen::VectorXd u = s.u();
    u(2) += 0.004;  // further stretch from the committed state
    u(5) -= 0.002;
    const auto base = a.evaluate(u, s.committed(), true, idx, 8);
    const double h = 1e-7;
    double worst = 0.0;
    for (int d = 0; d < 8; ++d) {
      Eigen::VectorXd up = u, um = u;
      up(d) += h;
      um(d) -= h;
      const Eigen::VectorXd col = (a.evaluate(up, s.committed(), false, idx, 8).f_int -
                                   a.evaluate(um, s.committed(), false, idx, 8).f_int) / (2 * h);
      worst = std::max(worst, (col - base.K.col(d)).norm() / base.K.col(d).norm());
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("Sherman-Morrison update equals the inverse of the rank-one updated matrix") {
    Rng rng(11, 0);
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 20;
      Eigen::MatrixXd M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
      const Eigen::MatrixXd B = M * M.transpose() + n * Eigen::MatrixXd::Identity(n, n);
      Eigen::VectorXd du(n), dr(n);
      for (int i = 0; i < n; ++i) {
        du(i) = rng.uniform(-1.0, 1.0);
        dr(i) = rng.uniform(-1.0, 1.0);
      }
      // Direct route: the secant matrix with B_new du = dr, inverted densely.
      const Eigen::MatrixXd B_new = B + (dr - B * du) * du.transpose() / du.squaredNorm();
      const Eigen::MatrixXd direct = B_new.inverse();
      Eigen::MatrixXd Binv = B.inverse();
      REQUIRE(broyden_inverse_update(Binv, du, dr));
      CHECK((Binv - direct).cwiseAbs().maxCoeff() <= 1e-10 * direct.cwiseAbs().maxCoeff());
      CHECK((Binv * dr - du).norm() <= 1e-12 * du.norm());
    }
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    CHECK_FALSE(broyden_inverse_update(I, Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)));
    CHECK(I == Eigen::MatrixXd::Identity(2, 2));
  }

  TEST_CASE("elastic coupon converges within two iterations per step") {
    CouponOptions o;
    o.steps_per_phase = 3;
    const FeProblem p = coupon_problem(o);
    const oracle::OracleMaterial mat(elastic_j2());
    const BvpResult r = run_bvp(p, mat);
    REQUIRE(r.completed);
    for (const StepRecord& s : r.steps) CHECK(s.iterations <= 2);
  }

  TEST_CASE("elastic plate returns to zero displacement after the full protocol") {
    PlateOptions o;
    o.n_circ = 8;
    o.n_rad = 6;
    o.steps_per_unit = 2;
    const FeProblem p = plate_problem(o);
    const oracle::OracleMaterial mat(elastic_j2());
    const BvpResult r = run_bvp(p, mat);
    REQUIRE(r.completed);
    CHECK(r.u.back().norm() <= 1e-8);
    CHECK(r.u[2].norm() > 1.0);
  }

  TEST_CASE("Broyden and Newton agree on a plastic step") {
    FeProblem p = one_element_stretch(0.08, 1);
    p.solver.tau0 = 1e-13;
    p.solver.taur = 1e-13;
    const oracle::OracleMaterial mat(oracle::J2Params{});
    FeSolver broyden(p, mat), newton(p, mat);
    const StepRecord rb = broyden.advance(1, IterationMethod::broyden);
    newton.advance(1, IterationMethod::newton);
    CHECK(rb.iterations > 1);
    CHECK((broyden.u() - newton.u()).norm() <= 1e-8);
    CHECK(broyden.committed()[6] > 0.0);  // yielded
  }

  TEST_CASE("equilibrium holds at convergence on the plate") {
    PlateOptions o;
    o.n_circ = 8;
    o.n_rad = 6;
    o.steps_per_unit = 3;
    const FeProblem p = plate_problem(o);
    const oracle::OracleMaterial mat(oracle::J2Params{});
    const BvpResult r = run_bvp(p, mat);
    REQUIRE(r.completed);
    for (const StepRecord& s : r.steps)
      CHECK(s.equilibrium_error <= std::max(p.solver.tau0, p.solver.taur * s.r0));
  }

  TEST_CASE("failed increments leave the committed state untouched") {
    FeProblem p = one_element_stretch(0.08, 2);
    p.solver.max_iterations = 1;
    p.solver.max_bisections = 1;
    const oracle::OracleMaterial mat(oracle::J2Params{});
    FeSolver s(p, mat);
    const auto hash = s.state_hash();
    const Eigen::VectorXd u0 = s.u();
    try {
      s.advance(1);
      FAIL("expected a convergence failure");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("load step 1") != std::string::npos);
    }
    CHECK(s.state_hash() == hash);
    CHECK(s.u() == u0);
    CHECK(s.tau() == 0.0);

    // run_bvp reports the failing step and keeps the history before it.
    const BvpResult r = run_bvp(p, mat);
    CHECK_FALSE(r.completed);
    CHECK(r.failed_step == 1);
    CHECK(r.u.size() == 1);
  }

  TEST_CASE("bisection recovers a step the full increment cannot solve") {
    const StrideLimitedElastic mat(0.6e-3);
    FeProblem p = one_element_stretch(1e-3, 1);
    FeSolver s(p, mat);
    const StepRecord r = s.advance(1);
    CHECK(r.bisections == 1);  // the two halves stay under the limit
    CHECK(s.tau() == 1.0);
    CHECK(s.u()(p.control_dof) == 1e-3);
    CHECK(s.committed()[0] == doctest::Approx(1e-3));

    p.solver.max_bisections = 0;
    FeSolver strict(p, mat);
    CHECK_THROWS_WITH_AS(strict.advance(1), doctest::Contains("stride"), NumericalError);
  }

  TEST_CASE("coupon with J2 dissipates energy over its cycle") {
    CouponOptions o;
    o.n_arc = 2;
    o.n_rad = 2;
    o.n_right = 8;
    o.steps_per_phase = 6;
    const FeProblem p = coupon_problem(o);
    const oracle::OracleMaterial mat(oracle::J2Params{});
    const BvpResult r = run_bvp(p, mat);
    REQUIRE(r.completed);
    double area = 0.0, u_prev = 0.0, f_prev = 0.0;
    for (const StepRecord& s : r.steps) {
      area += 0.5 * (s.reaction + f_prev) * (s.control_displacement - u_prev);
      u_prev = s.control_displacement;
      f_prev = s.reaction;
    }
    CHECK(area > 0.0);
    CHECK(r.steps[5].control_displacement == doctest::Approx(0.9));
  }

  TEST_CASE("Emax is zero for identical runs and follows the normalization by hand") {
    BvpResult ref;
    const int T = 4;
    for (int t = 0; t <= T; ++t) {
      ref.u.push_back(Eigen::Vector4d(0.1 * t, -0.2 * t, 0.05 * t, 0.0));
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 6), e = Eigen::MatrixXd::Zero(2, 6);
      s(0, 0) = t;          // q = |s11|
      s(1, 0) = 0.5 * t;
      e(0, 5) = 0.01 * t;   // eps_vm = |gamma12| / sqrt(3)
      e(1, 5) = 0.002 * t;
      ref.stress.push_back(s);
      ref.strain.push_back(e);
    }
    const EmaxFields zero = emax_fields(ref, ref);
    for (double v : zero.displacement) CHECK(v == 0.0);
    for (double v : zero.stress) CHECK(v == 0.0);
    for (double v : zero.strain) CHECK(v == 0.0);
    CHECK(zero.stress_scale == doctest::Approx(std::sqrt(1.0 + 4.0 + 9.0 + 16.0)));

    BvpResult sur = ref;
    const double shift = 0.01 * zero.stress_scale;
    for (int t = 1; t <= T; ++t) sur.stress[t](0, 0) += shift;
    const EmaxFields f = emax_fields(ref, sur);
    CHECK(f.stress[0] == doctest::Approx(0.01 * std::sqrt(double(T))).epsilon(1e-12));
    CHECK(f.stress[1] == 0.0);
    // The denominator is the set maximum, not the point's own norm.
    sur = ref;
    for (int t = 1; t <= T; ++t) sur.stress[t](1, 0) += shift;
    CHECK(emax_fields(ref, sur).stress[1] == doctest::Approx(0.01 * std::sqrt(double(T))).epsilon(1e-12));

    sur = ref;
    sur.u.pop_back();
    CHECK_THROWS_AS(emax_fields(ref, sur), ConfigError);
  }

  TEST_CASE("BVP dumps round trip") {
    PlateOptions o;
    o.n_circ = 4;
    o.n_rad = 2;
    o.steps_per_unit = 1;
    const FeProblem p = plate_problem(o);
    const oracle::OracleMaterial mat(oracle::J2Params{});
    const BvpResult r = run_bvp(p, mat);
    const auto dir = scratch("dump");
    save_bvp(r, p.mesh, dir);
    Mesh m;
    const BvpResult back = load_bvp(dir, &m);
    CHECK(back.completed == r.completed);
    CHECK(back.steps.size() == r.steps.size());
    CHECK(back.steps.back().reaction == r.steps.back().reaction);
    REQUIRE(back.u.size() == r.u.size());
    for (std::size_t t = 0; t < r.u.size(); ++t) {
      CHECK(back.u[t] == r.u[t]);
      CHECK(back.stress[t] == r.stress[t]);
      CHECK(back.strain[t] == r.strain[t]);
    }
    CHECK(m.n_nodes() == p.mesh.n_nodes());
    const Json s = write_comparison(r, back, m, dir / "cmp");
    CHECK(s["emax_stress"]["max"].get<double>() == 0.0);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("problem files: benchmarks, explicit meshes and errors") {
    const ProblemFile b = problem_from_json(Json::parse(R"({"benchmark": "plate", "options": {"n_circ": 4, "n_rad": 2},
                                                          "solver": {"method": "newton"}})"));
    CHECK(b.problem.mesh.n_elements() == 8);
    CHECK(b.problem.solver.method == IterationMethod::newton);
    CHECK(std::holds_alternative<oracle::J2Params>(b.material.params));
    CHECK(std::holds_alternative<oracle::DpParams>(problem_from_json(Json::parse(R"({"benchmark": "shear"})")).material.params));

    const Json explicit_problem = Json::parse(R"({
      "name": "bar",
      "mesh": {"nodes": [[0, 0], [1, 0], [1, 1], [0, 1]], "elements": [[0, 1, 2, 3]]},
      "schedules": [[0, 0.5, 1]],
      "dirichlet": [{"nodes": [0, 3], "component": 0},
                    {"nodes": [0], "component": 1},
                    {"nodes": [1, 2], "component": 0, "value": 0.001}],
      "reaction_dofs": [2, 4],
      "control_dof": 2,
      "material": {"type": "oracle", "params": {"model": "j2", "sigma_y": 1e9}}})");
    const ProblemFile e = problem_from_json(explicit_problem);
    const auto mat = make_material(e.material);
    const BvpResult r = run_bvp(e.problem, *mat);
    REQUIRE(r.completed);
    // Plane-strain uniaxial stress in x: E / (1 - nu^2) times the strain.
    CHECK(r.steps.back().reaction == doctest::Approx(50.0 / (1.0 - 0.09) * 0.001).epsilon(1e-10));

    CHECK_THROWS_WITH_AS(problem_from_json(Json::parse(R"({"benchmark": "bridge"})")), doctest::Contains("bridge"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(problem_from_json(Json::parse(R"({"benchmark": "plate", "options": {"n_cric": 4}})")),
                         doctest::Contains("n_cric"), ConfigError);
    Json missing = explicit_problem;
    missing.erase("schedules");
    CHECK_THROWS_WITH_AS(problem_from_json(missing), doctest::Contains("schedules"), ConfigError);
    const MaterialSpec ck = material_spec_from_json(Json::parse(R"({"type": "checkpoint", "path": "ck", "dt": 0.25})"), "/base");
    CHECK(ck.checkpoint == std::filesystem::path("/base/ck"));
    CHECK(ck.ode.dt == 0.25);
    CHECK(material_spec_from_json(material_spec_to_json(ck)).checkpoint == ck.checkpoint);
  }
}
