#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "incde/datagen/dataset.hpp"

using namespace incde;
using namespace incde::datagen;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_SUITE("datagen") {
  TEST_CASE("random walk increments are bounded and forced segments stay elastic") {
    const oracle::OracleParams mat{oracle::J2Params{}};
    WalkConfig cfg;
    cfg.n_steps = 200;
    int forced_rows = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      cfg.seed = 1000 + s;
      const Walk w = random_walk(cfg, mat);
      CHECK(w.strain.row(0).isZero(0.0));
      for (int t = 1; t < cfg.n_steps; ++t)
        CHECK((w.strain.row(t) - w.strain.row(t - 1)).cwiseAbs().maxCoeff() < 0.01);
      std::vector<oracle::OracleState> states;
      const StressSeries sig = oracle::oracle_stress_series(mat, w.strain, &states);
      for (int t = 1; t < cfg.n_steps; ++t) {
        if (!w.forced_elastic[t]) continue;
        ++forced_rows;
        CHECK(oracle::yield_function(mat, mech::Stress(mech::Vec6(sig.row(t).transpose())), states[t]) < 0.0);
      }
    }
    CHECK(forced_rows > 100);
  }

  TEST_CASE("same seed gives a bitwise identical walk") {
    const oracle::OracleParams mat{oracle::DpParams{}};
    WalkConfig cfg;
    cfg.seed = 77;
    const auto a = random_walk_series(cfg, mat, 3);
    const auto b = random_walk_series(cfg, mat, 3);
    CHECK(a == b);
    CHECK(!(a == random_walk_series(cfg, mat, 4)));
  }

  TEST_CASE("partitioning") {
    StrainSeries s(3, 6);
    s.row(0).setZero();
    s.row(1) << 0.4, -0.2, 0, 0, 0, 0.1;
    s.row(2) << 0.1, 0.1, 0.1, 0.1, 0.1, 0.1;
    CHECK(partition_series(s, 1) == s);
    CHECK_THROWS_AS(partition_series(s, 0), ConfigError);

    StrainSeries two = s.topRows(2);
    const StrainSeries p = partition_series(two, 2);
    REQUIRE(p.rows() == 4);
    CHECK(p.row(0).isZero(0.0));
    CHECK(p.row(1) == 0.5 * two.row(1));
    CHECK(p.row(2) == two.row(1));
    CHECK(p.row(3) == two.row(1));

    // original points are a subsequence and inserted points lie on the segments
    const StrainSeries q = partition_series(s, 4);
    for (int t = 0; t < 3; ++t) CHECK(q.row(4 * t) == s.row(t));
    for (int t = 0; t < 2; ++t)
      for (int c = 1; c < 4; ++c) {
        const Eigen::RowVectorXd lin = s.row(t) + (c / 4.0) * (s.row(t + 1) - s.row(t));
        CHECK((q.row(4 * t + c) - lin).cwiseAbs().maxCoeff() <= 1e-16);
      }
  }

  TEST_CASE("partitioned increments follow the scaled raw distribution") {
    const oracle::OracleParams mat{oracle::J2Params{}};
    WalkConfig cfg;
    cfg.n_steps = 100;
    const int C = 4;
    std::vector<double> raw, part;
    for (std::uint64_t i = 0; raw.size() < 120000; ++i) {
      cfg.seed = 1;
      const StrainSeries w = random_walk_series(cfg, mat, i);
      for (int t = 1; t < w.rows(); ++t)
        for (int k = 0; k < 6; ++k) raw.push_back(std::abs(w(t, k) - w(t - 1, k)));
    }
    for (std::uint64_t i = 0; part.size() < 120000; ++i) {
      cfg.seed = 2;
      const StrainSeries w = partition_series(random_walk_series(cfg, mat, i), C);
      // rows past the last original point are holds, not increments
      for (int t = 1; t <= (cfg.n_steps - 1) * C; ++t)
        for (int k = 0; k < 6; ++k) part.push_back(C * std::abs(w(t, k) - w(t - 1, k)));
    }
    CHECK(ks_statistic(raw, part) < 0.01);
  }

  TEST_CASE("dataset shapes, normalization range and decomposition") {
    WalkConfig cfg;
    cfg.n_steps = 10;
    cfg.seed = 5;
    const Dataset ds = build_dataset(material_preset("j2-iso"), 4, cfg, 3);
    CHECK(ds.n_samples == 4);
    CHECK(ds.n_steps == 30);
    CHECK(ds.strain.size() == 4u * 30u * 6u);
    for (int i = 0; i < 4; ++i) {
      CHECK(ds.strain_series(i).row(0).isZero(0.0));
      const Eigen::MatrixXd y = ds.normalized_targets(i);
      CHECK(y.cwiseAbs().maxCoeff() <= 0.5);
      for (int t = 0; t < ds.n_steps; ++t) {
        const mech::Vec6 e = ds.norm.normalize_strain(ds.strain_series(i).row(t).transpose());
        CHECK(e.cwiseAbs().maxCoeff() <= 0.5);
      }
    }

    const Dataset dd = build_dataset(material_preset("dp-decomp"), 4, cfg, 3);
    REQUIRE(dd.pressure.size() == 4u * 30u);
    const Dataset full = build_dataset(material_preset("dp"), 4, cfg, 3);
    for (int i = 0; i < 4; ++i) {
      CHECK((dd.stress_series(i) - full.stress_series(i)).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK(dd.normalized_targets(i).cwiseAbs().maxCoeff() <= 0.5);
      CHECK(dd.normalized_targets(i).cols() == 7);
    }
  }

  TEST_CASE("norm constants put the peak at one half") {
    WalkConfig cfg;
    cfg.n_steps = 20;
    cfg.seed = 8;
    const Dataset ds = build_dataset(material_preset("j2-iso"), 6, cfg, 2);
    double m = 0.0;
    int at_i = 0, at_t = 0;
    for (int i = 0; i < ds.n_samples; ++i)
      for (int t = 0; t < ds.n_steps; ++t) {
        const auto s = ds.stress_series(i);
        for (int k = 0; k < 3; ++k)
          if (std::abs(s(t, k)) > m) {
            m = std::abs(s(t, k));
            at_i = i;
            at_t = t;
          }
      }
    CHECK(std::abs(ds.normalized_targets(at_i).row(at_t).head<3>().cwiseAbs().maxCoeff() - 0.5) == 0.0);
    CHECK(ds.normalized_targets(0).row(0).isZero(0.0));

    for (auto mode : {OutputMode::full, OutputMode::pressure_deviatoric}) {
      const mech::Vec6 sig = (mech::Vec6() << 0.3, -1.1, 0.2, 0.05, -0.4, 0.7).finished();
      const mech::Vec6 back = ds.norm.stress_from_output(ds.norm.normalize_stress(sig, mode), mode);
      CHECK((back - sig).cwiseAbs().maxCoeff() <= 1e-14 * 1.1);
      const mech::Vec6 e = sig * 0.01;
      CHECK((ds.norm.denormalize_strain(ds.norm.normalize_strain(e)) - e).cwiseAbs().maxCoeff() <= 1e-16);
    }
  }

  TEST_CASE("degenerate dataset is rejected") {
    Dataset ds;
    ds.n_samples = 2;
    ds.n_steps = 3;
    ds.strain.assign(36, 0.0);
    ds.stress.assign(36, 0.0);
    CHECK_THROWS_AS(compute_norm_constants(ds), NumericalError);
  }

  TEST_CASE("labels at original indices are partition invariant on elastic paths") {
    const oracle::OracleParams mat{oracle::J2Params{}};
    StrainSeries s(5, 6);
    s.row(0).setZero();
    s.row(1) << 1e-3, -2e-3, 0, 1e-3, 0, 0;
    s.row(2) << 2e-3, -1e-3, 1e-3, 0, 2e-3, 0;
    s.row(3) << -1e-3, 0, 0, 0, 0, 3e-3;
    s.row(4) << 0, 1e-3, -1e-3, 0, 0, 0;
    const StressSeries a = oracle::oracle_stress_series(mat, s);
    const StressSeries b = oracle::oracle_stress_series(mat, partition_series(s, 4));
    for (int t = 0; t < 5; ++t) CHECK((a.row(t) - b.row(4 * t)).cwiseAbs().maxCoeff() <= 1e-9);
  }

  TEST_CASE("generation is independent of the thread count and survives a disk round trip") {
    WalkConfig cfg;
    cfg.n_steps = 15;
    cfg.seed = 21;
    setenv("INCDE_THREADS", "1", 1);
    const Dataset one = build_dataset(material_preset("dp-decomp"), 9, cfg, 2);
    setenv("INCDE_THREADS", "4", 1);
    const Dataset four = build_dataset(material_preset("dp-decomp"), 9, cfg, 2);
    unsetenv("INCDE_THREADS");
    CHECK(one.strain == four.strain);
    CHECK(one.stress == four.stress);
    CHECK(one.pressure == four.pressure);

    const auto dir = std::filesystem::temp_directory_path() / "incde_dataset_roundtrip";
    std::filesystem::remove_all(dir);
    save_dataset(one, dir);
    const Dataset back = load_dataset(dir);
    CHECK(back.strain == one.strain);
    CHECK(back.stress == one.stress);
    CHECK(back.pressure == one.pressure);
    CHECK(back.norm.eps_max == one.norm.eps_max);
    CHECK(back.norm.p_max == one.norm.p_max);
    CHECK(back.mode == OutputMode::pressure_deviatoric);
    CHECK(back.partitions == 2);
    CHECK(std::filesystem::file_size(dir / "strain.f64") == 9u * 30u * 6u * 8u);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("subset keeps samples in order") {
    WalkConfig cfg;
    cfg.n_steps = 6;
    const Dataset ds = build_dataset(material_preset("j2-iso"), 5, cfg, 1);
    const Dataset sub = ds.subset(2, 2);
    CHECK(sub.n_samples == 2);
    CHECK(sub.strain_series(0) == ds.strain_series(2));
    CHECK(sub.stress_series(1) == ds.stress_series(3));
    CHECK_THROWS_AS(ds.subset(4, 2), ConfigError);
  }

  TEST_CASE("material presets and JSON") {
    const auto p = material_preset("j2-combined");
    CHECK(std::get<oracle::J2Params>(p.params).beta_hat == 0.5);
    const auto back = material_from_json(material_to_json(material_preset("dp").params));
    CHECK(std::get<oracle::DpParams>(back).psi_deg == 25.0);
    CHECK_THROWS_AS(material_preset("steel"), ConfigError);
    try {
      material_from_json(Json{{"E", 3.0}});
      CHECK(false);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("\"model\"") != std::string::npos);
    }
  }
}
