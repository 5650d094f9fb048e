#include <cmath>
#include <random>

#include "doctest.h"
#include "incde/core/binary_io.hpp"
#include "incde/core/elasticity.hpp"
#include "incde/core/parallel.hpp"
#include "incde/core/rng.hpp"

using namespace incde;
using namespace incde::mech;

TEST_SUITE("core") {
  TEST_CASE("elastic stiffness matches hand-evaluated Lame constants") {
    const ElasticParams p{50.0, 0.3};
    // lambda = 50*0.3/(1.3*0.4), mu = 50/2.6
    const double lam = 15.0 / 0.52;
    const double mu = 50.0 / 2.6;
    const Mat6 C = elastic_stiffness(p);
    CHECK(C(0, 0) == doctest::Approx(lam + 2 * mu).epsilon(1e-14));
    CHECK(C(0, 0) == doctest::Approx(67.3077).epsilon(1e-6));
    CHECK(C(0, 1) == doctest::Approx(lam).epsilon(1e-14));
    CHECK(C(1, 2) == doctest::Approx(28.84615).epsilon(1e-6));
    CHECK(C(3, 3) == doctest::Approx(mu).epsilon(1e-14));
    CHECK(C(5, 5) == doctest::Approx(19.23077).epsilon(1e-6));
    CHECK(C(0, 3) == 0.0);
  }

  TEST_CASE("nu = 0 decouples the axial block") {
    const Mat6 C = elastic_stiffness({1.0, 0.0});
    Mat6 expect = Mat6::Zero();
    expect.diagonal() << 1, 1, 1, 0.5, 0.5, 0.5;
    CHECK((C - expect).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("stiffness is symmetric positive definite on a parameter grid") {
    for (double E : {0.1, 1.0, 50.0, 2e5})
      for (double nu : {-0.99, -0.5, 0.0, 0.2, 0.3, 0.45, 0.499}) {
        const Mat6 C = elastic_stiffness({E, nu});
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Mat6> es(C);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
      }
  }

  TEST_CASE("invalid elastic parameters are rejected") {
    CHECK_THROWS_AS(elastic_stiffness({50.0, 0.5}), ConfigError);
    CHECK_THROWS_AS(elastic_stiffness({0.0, 0.3}), ConfigError);
    CHECK_THROWS_AS(elastic_stiffness({50.0, -1.0}), ConfigError);
  }

  TEST_CASE("Voigt vectors reject non-finite components") {
    Vec6 v = Vec6::Zero();
    v[2] = std::nan("");
    CHECK_THROWS_AS(Stress{v}, NumericalError);
    v[2] = INFINITY;
    CHECK_THROWS_AS(Strain{v}, NumericalError);
    CHECK_THROWS_AS((Strain{1, 2, 3}), ConfigError);
  }

  TEST_CASE("engineering and tensor shear conversions are inverse") {
    const Strain e{1, 2, 3, 4, 5, 6};
    const Vec6 t = strain_to_tensor(e);
    CHECK(t[3] == 2.0);
    CHECK(t[5] == 3.0);
    CHECK(strain_from_tensor(t) == e);
  }

  TEST_CASE("pressure/deviator split") {
    auto pd = pressure_deviator(Stress{1, 1, 1, 0, 0, 0});
    CHECK(pd.p == 1.0);
    CHECK(pd.s.vec().norm() == 0.0);

    pd = pressure_deviator(Stress{3, 0, 0, 0, 0, 0});
    CHECK(pd.p == 1.0);
    CHECK(pd.s == Stress{2, -1, -1, 0, 0, 0});

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int k = 0; k < 200; ++k) {
      Vec6 v;
      for (auto& x : v) x = u(gen);
      const auto r = pressure_deviator(Stress(v));
      const double tr = r.s[0] + r.s[1] + r.s[2];
      CHECK(std::abs(tr) <= 1e-12 * std::max(1.0, std::abs(r.p)));
      const Vec6 back = r.p * identity6() + r.s.vec();
      CHECK((back - v).cwiseAbs().maxCoeff() <= 4 * std::numeric_limits<double>::epsilon() * v.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("von Mises stress") {
    CHECK(von_mises_stress(Stress{-2.5, 0, 0, 0, 0, 0}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(von_mises_stress(Stress{0, 0, 0, 0, 0, 0.7}) == doctest::Approx(std::sqrt(3.0) * 0.7).epsilon(1e-15));
    CHECK(von_mises_stress(Stress{4, 4, 4, 0, 0, 0}) == 0.0);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 200; ++k) {
      Vec6 v;
      for (auto& x : v) x = u(gen);
      const double q = von_mises_stress(Stress(v));
      const double qs = von_mises_stress(Stress(Vec6(v + u(gen) * identity6())));
      CHECK(std::abs(q - qs) <= 1e-12 * std::max(1.0, q));
    }
  }

  TEST_CASE("von Mises strain follows the deviatoric formula") {
    // uniaxial: e = eps0 [2/3, -1/3, -1/3]  ->  sqrt(2/3 * 6/9) eps0 = 2/3 eps0
    CHECK(von_mises_strain(Strain{0.03, 0, 0, 0, 0, 0}) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(von_mises_strain(Strain{0, 0, 0, 0, 0, 0.06}) == doctest::Approx(0.06 / std::sqrt(3.0)).epsilon(1e-14));
    for (double a : {-1.0, 1e-3, 0.25, 7.0}) CHECK(von_mises_strain(Strain{a, a, a, 0, 0, 0}) <= 1e-14);
  }

  TEST_CASE("contraction counts shear slots twice") {
    const Vec6 a = (Vec6() << 1, 0, 0, 0, 0, 1).finished();
    CHECK(contract(a, a) == 3.0);
    const Mat6 P = deviatoric_projector();
    const Strain e{0.1, -0.2, 0.05, 0.4, 0.0, -0.6};
    const Vec6 dev_t = P * e.vec();
    CHECK(std::abs(dev_t.head<3>().sum()) < 1e-15);
    CHECK(dev_t[3] == doctest::Approx(0.2));
  }

  TEST_CASE("rng is deterministic and stream dependent") {
    Rng a(42, 7), b(42, 7), c(42, 8);
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      differ = differ || (x != c.uniform());
    }
    CHECK(differ);
    Rng d(1);
    for (int i = 0; i < 1000; ++i) {
      const auto k = d.uniform_int(2, 10);
      CHECK(k >= 2);
      CHECK(k <= 10);
    }
  }

  TEST_CASE("float64 files round-trip") {
    const auto path = std::filesystem::temp_directory_path() / "incde_core_roundtrip.f64";
    const std::vector<double> v{0.0, -1.5, 1e-300, 3.141592653589793};
    write_f64(path, v);
    CHECK(read_f64(path, v.size()) == v);
    CHECK_THROWS_AS(read_f64(path, 5), ConfigError);
    std::filesystem::remove(path);
  }

  TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw NumericalError("x"); }), NumericalError);
  }
}
