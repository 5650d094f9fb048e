#include "incde/experiments/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incde/core/csv.hpp"
#include "incde/core/parallel.hpp"

namespace incde::experiments {

using model::Method;
using model::SolverConfig;

std::vector<model::Prediction> predict_parallel(const model::IncdeModel& m, const std::vector<StrainSeries>& paths,
                                                const SolverConfig& cfg) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(thread_count(), paths.size()));
  std::vector<std::vector<model::Prediction>> parts(workers);
  parallel_for(workers, [&](std::size_t w) {
    const std::size_t lo = paths.size() * w / workers, hi = paths.size() * (w + 1) / workers;
    parts[w] = model::predict_batch(m, {paths.begin() + lo, paths.begin() + hi}, cfg);
  });
  std::vector<model::Prediction> out;
  out.reserve(paths.size());
  for (auto& p : parts)
    for (auto& q : p) out.push_back(std::move(q));
  return out;
}

BatchPredictor model_predictor(const model::IncdeModel& m, const SolverConfig& cfg) {
  cfg.validate();
  return [&m, cfg](const std::vector<StrainSeries>& paths) { return predict_parallel(m, paths, cfg); };
}

BatchPredictor oracle_predictor(const oracle::OracleParams& p) {
  return [p](const std::vector<StrainSeries>& paths) {
    std::vector<model::Prediction> out(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) {
      out[i].stress = oracle::oracle_stress_series(p, paths[i]);
      out[i].hidden.resize(paths[i].rows(), 0);
    });
    return out;
  };
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::vector<StressSeries> oracle_many(const oracle::OracleParams& p, const std::vector<StrainSeries>& paths) {
  std::vector<StressSeries> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t i) { out[i] = oracle::oracle_stress_series(p, paths[i]); });
  return out;
}

std::vector<StrainSeries> discretize_all(const std::vector<ProtocolSpec>& specs, double ds) {
  std::vector<StrainSeries> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(discretize(s, ds));
  return out;
}

/// Squared error summed over rows 1..T of the given columns.
double squared_error(const StressSeries& a, const StressSeries& b, int c0, int c1) {
  return (a.bottomRows(a.rows() - 1).middleCols(c0, c1 - c0) - b.bottomRows(b.rows() - 1).middleCols(c0, c1 - c0))
      .squaredNorm();
}

}  // namespace

Example1Result example1(const model::IncdeModel& m, const oracle::OracleParams& truth, const Example1Config& cfg) {
  return example1(model_predictor(m, cfg.solver), truth, cfg);
}

Example1Result example1(const BatchPredictor& predict, const oracle::OracleParams& truth, const Example1Config& cfg) {
  if (cfg.n_protocols <= 0 || cfg.base_steps.empty() || cfg.z_steps.size() < 2 || cfg.histogram_bins <= 0)
    throw ConfigError("example1: empty configuration");
  const auto mono = sample_protocols(cfg.n_protocols, Shape::monotonic, cfg.seed);
  const auto cyc = sample_protocols(cfg.n_protocols, Shape::cyclic, cfg.seed + 1);
  const double N = cfg.n_protocols;

  Example1Result r;
  r.hist_edges.resize(static_cast<std::size_t>(cfg.histogram_bins) + 1);
  for (int k = 0; k <= cfg.histogram_bins; ++k) r.hist_edges[k] = -1.0 + 2.0 * k / cfg.histogram_bins;
  r.hist_counts.assign(static_cast<std::size_t>(cfg.histogram_bins), 0);
  r.z_min = std::numeric_limits<double>::infinity();
  r.z_max = -r.z_min;
  auto record_hidden = [&](const std::vector<model::Prediction>& preds) {
    for (const auto& p : preds)
      for (Eigen::Index i = 0; i < p.hidden.size(); ++i) {
        const double z = p.hidden.data()[i];
        r.z_min = std::min(r.z_min, z);
        r.z_max = std::max(r.z_max, z);
        if (!(std::abs(z) < 1.0)) ++r.z_outside;
        const int bin = std::clamp(static_cast<int>((z + 1.0) / 2.0 * cfg.histogram_bins), 0, cfg.histogram_bins - 1);
        ++r.hist_counts[bin];
      }
  };

  for (double ds : cfg.base_steps) {
    Example1Row row;
    row.base_step = ds;
    row.steps_monotonic = protocol_steps(Shape::monotonic, ds);
    row.steps_cyclic = protocol_steps(Shape::cyclic, ds);
    double sq[2][2] = {{0, 0}, {0, 0}};  // [set][axial, shear]
    const std::vector<ProtocolSpec>* sets[2] = {&mono, &cyc};
    for (int s = 0; s < 2; ++s) {
      const auto paths = discretize_all(*sets[s], ds);
      const auto preds = predict(paths);
      const auto refs = oracle_many(truth, paths);
      for (std::size_t i = 0; i < paths.size(); ++i) {
        sq[s][0] += squared_error(preds[i].stress, refs[i], 0, 3);
        sq[s][1] += squared_error(preds[i].stress, refs[i], 3, 6);
      }
      record_hidden(preds);
    }
    const double Tm = row.steps_monotonic, Tc = row.steps_cyclic, Tall = N * (Tm + Tc);
    row.e_monotonic = std::sqrt(sq[0][0] + sq[0][1]) / (N * Tm);
    row.e_cyclic = std::sqrt(sq[1][0] + sq[1][1]) / (N * Tc);
    row.e_axial = std::sqrt(sq[0][0] + sq[1][0]) / Tall;
    row.e_shear = std::sqrt(sq[0][1] + sq[1][1]) / Tall;
    row.e_all = std::sqrt(sq[0][0] + sq[0][1] + sq[1][0] + sq[1][1]) / Tall;
    r.rows.push_back(row);
  }

  // Hidden-state refinement on cyclic protocols, compared at the end point.
  const auto zspecs = sample_protocols(cfg.n_z_protocols, Shape::cyclic, cfg.seed + 2);
  auto final_hidden = [&](double ds) {
    std::vector<StrainSeries> paths;
    // round(0.1 / ds) steps per segment so every level ends at the same strain.
    const int per = std::max(1, static_cast<int>(std::lround(0.1 / ds)));
    for (const auto& s : zspecs) paths.push_back(discretize_segments(s, per));
    const auto preds = predict(paths);
    std::vector<Eigen::VectorXd> out;
    for (const auto& p : preds) out.push_back(p.hidden.bottomRows(1).transpose());
    return out;
  };
  const auto zref = final_hidden(cfg.z_steps.front());
  for (std::size_t k = 1; k < cfg.z_steps.size(); ++k) {
    const auto z = final_hidden(cfg.z_steps[k]);
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) sum += (z[i] - zref[i]).norm();
    r.z_steps.push_back(cfg.z_steps[k]);
    r.z_errors.push_back(sum / static_cast<double>(z.size()));
  }
  return r;
}

Json write_example1(const Example1Result& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "error_vs_step.csv", {"base_step", "steps_monotonic", "steps_cyclic", "e_axial", "e_shear",
                                            "e_monotonic", "e_cyclic", "e_all"});
    for (const auto& x : r.rows)
      w.row({x.base_step, double(x.steps_monotonic), double(x.steps_cyclic), x.e_axial, x.e_shear, x.e_monotonic,
             x.e_cyclic, x.e_all});
  }
  {
    CsvWriter w(dir / "hidden_convergence.csv", {"base_step", "mean_error"});
    for (std::size_t k = 0; k < r.z_steps.size(); ++k) w.row({r.z_steps[k], r.z_errors[k]});
  }
  {
    CsvWriter w(dir / "hidden_histogram.csv", {"lo", "hi", "count"});
    for (std::size_t k = 0; k < r.hist_counts.size(); ++k)
      w.row({r.hist_edges[k], r.hist_edges[k + 1], double(r.hist_counts[k])});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < r.z_errors.size(); ++k) decreasing = decreasing && r.z_errors[k] > r.z_errors[k - 1];
  const Json s = {{"rows", r.rows.size()},
                  {"e_all_finest", r.rows.empty() ? 0.0 : r.rows.front().e_all},
                  {"e_all_coarsest", r.rows.empty() ? 0.0 : r.rows.back().e_all},
                  {"z_min", r.z_min},
                  {"z_max", r.z_max},
                  {"z_outside_unit_interval", r.z_outside},
                  {"hidden_error_decreases_with_refinement", decreasing}};
  write_json_file((dir / "summary.json").string(), s);
  return s;
}

void solver_study(const model::IncdeModel& m, const oracle::OracleParams* truth, const Example2Config& cfg,
                  Example2Result& r) {
  cfg.reference.validate();
  const StrainSeries path = reversal_protocol(cfg.component_step, cfg.peak);
  const model::Prediction ref = model::predict_stress_series(m, path, cfg.reference);
  StressSeries gt;
  if (truth) gt = oracle::oracle_stress_series(*truth, path);
  r.solver_rows.clear();
  r.slope_z.clear();
  r.slope_sigma.clear();
  for (Method method : cfg.methods) {
    std::vector<double> ez, es;
    for (double dt : cfg.dts) {
      const model::Prediction p = model::predict_stress_series(m, path, {method, dt});
      SolverRow row;
      row.method = method;
      row.dt = dt;
      row.error_truth = truth ? (p.stress - gt).norm() : std::numeric_limits<double>::quiet_NaN();
      row.error_z = (p.hidden - ref.hidden).norm();
      row.error_sigma = (p.stress - ref.stress).norm();
      ez.push_back(row.error_z);
      es.push_back(row.error_sigma);
      r.solver_rows.push_back(row);
    }
    r.slope_z.push_back(loglog_slope(cfg.dts, ez));
    r.slope_sigma.push_back(loglog_slope(cfg.dts, es));
  }
}

void increment_study(const model::IncdeModel& m, const Example2Config& cfg, Example2Result& r) {
  cfg.increment_solver.validate();
  if (cfg.increment_steps.size() < 2) throw ConfigError("example2: need at least two increment steps");
  // Every path is compared with the reference at the points of the coarsest path.
  const double coarse = *std::max_element(cfg.increment_steps.begin(), cfg.increment_steps.end());
  const int n_coarse = static_cast<int>(std::lround(cfg.peak / coarse)) * 4;
  auto sample = [&](const model::Prediction& p, double step) {
    const int stride = static_cast<int>(std::lround(coarse / step));
    if (std::abs(stride * step - coarse) > 1e-9 * coarse)
      throw ConfigError("example2: increment steps must divide the coarsest step");
    Eigen::MatrixXd z(n_coarse + 1, p.hidden.cols()), s(n_coarse + 1, 6);
    for (int k = 0; k <= n_coarse; ++k) {
      z.row(k) = p.hidden.row(k * stride);
      s.row(k) = p.stress.row(k * stride);
    }
    return std::pair(z, s);
  };
  const model::Prediction iref = model::predict_stress_series(
      m, reversal_protocol(cfg.increment_reference, cfg.peak), cfg.increment_solver);
  const auto [zr, sr] = sample(iref, cfg.increment_reference);
  std::vector<double> norms, ez, es;
  r.increment_rows.clear();
  for (double step : cfg.increment_steps) {
    const model::Prediction p =
        model::predict_stress_series(m, reversal_protocol(step, cfg.peak), cfg.increment_solver);
    const auto [z, s] = sample(p, step);
    IncrementRow row;
    row.component_step = step;
    row.increment_norm = step * std::sqrt(6.0);
    row.error_z = (z - zr).norm();
    row.error_sigma = (s - sr).norm();
    norms.push_back(row.increment_norm);
    ez.push_back(row.error_z);
    es.push_back(row.error_sigma);
    r.increment_rows.push_back(row);
  }
  r.increment_slope_z = loglog_slope(norms, ez);
  r.increment_slope_sigma = loglog_slope(norms, es);
}

Example2Result example2(const model::IncdeModel& m, const oracle::OracleParams* truth, const Example2Config& cfg) {
  Example2Result r;
  solver_study(m, truth, cfg, r);
  increment_study(m, cfg, r);
  return r;
}

Json write_example2(const Example2Result& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "solver_convergence.csv", {"method", "dt", "error_truth", "error_z", "error_sigma"});
    for (const auto& x : r.solver_rows)
      w.row_cells({model::to_string(x.method), format_number(x.dt), format_number(x.error_truth),
                   format_number(x.error_z), format_number(x.error_sigma)});
  }
  {
    CsvWriter w(dir / "increment_convergence.csv", {"component_step", "increment_norm", "error_z", "error_sigma"});
    for (const auto& x : r.increment_rows) w.row({x.component_step, x.increment_norm, x.error_z, x.error_sigma});
  }
  Json slopes = Json::object();
  const std::size_t per = r.slope_z.empty() ? 0 : r.solver_rows.size() / r.slope_z.size();
  for (std::size_t k = 0; k < r.slope_z.size(); ++k)
    slopes[model::to_string(r.solver_rows[k * per].method)] = {{"z", r.slope_z[k]}, {"sigma", r.slope_sigma[k]}};
  const Json s = {{"dt_slopes", slopes},
                  {"increment_slope", {{"z", r.increment_slope_z}, {"sigma", r.increment_slope_sigma}}}};
  write_json_file((dir / "summary.json").string(), s);
  return s;
}

double first_yield_von_mises(const StrainSeries& strain, const StressSeries& stress, const mech::Mat6& C, int from,
                             double tol) {
  for (Eigen::Index t = std::max(1, from); t < strain.rows(); ++t) {
    const mech::Vec6 elastic = C * (strain.row(t) - strain.row(t - 1)).transpose();
    const mech::Vec6 actual = (stress.row(t) - stress.row(t - 1)).transpose();
    if ((actual - elastic).norm() > tol * elastic.norm())
      return mech::von_mises_stress(mech::Stress(mech::Vec6(stress.row(t - 1).transpose())));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Example3Result example3(const model::IncdeModel& m, const oracle::OracleParams& truth, const SolverConfig& solver,
                        const Example2Config& protocol) {
  Example3Result r;
  r.strain = reversal_protocol(protocol.component_step, protocol.peak);
  r.surrogate = model::predict_stress_series(m, r.strain, solver).stress;
  r.oracle = oracle::oracle_stress_series(truth, r.strain);
  const double T = static_cast<double>(r.strain.rows() - 1);
  for (int c = 0; c < 6; ++c)
    r.rmse[c] = std::sqrt((r.surrogate.col(c) - r.oracle.col(c)).bottomRows(r.strain.rows() - 1).squaredNorm() / T);
  const auto* j2 = std::get_if<oracle::J2Params>(&truth);
  r.sigma_y = j2 ? j2->sigma_y : std::get<oracle::DpParams>(truth).sigma_y;
  const mech::Mat6 C = mech::elastic_stiffness(oracle::elastic_of(truth));
  const int peak = static_cast<int>(std::lround(protocol.peak / protocol.component_step));
  r.oracle_forward_yield = first_yield_von_mises(r.strain, r.oracle, C, 1);
  r.oracle_reverse_yield = first_yield_von_mises(r.strain, r.oracle, C, peak + 1);
  r.surrogate_forward_yield = first_yield_von_mises(r.strain, r.surrogate, C, 1);
  r.surrogate_reverse_yield = first_yield_von_mises(r.strain, r.surrogate, C, peak + 1);
  return r;
}

Json write_example3(const Example3Result& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const char* names[6] = {"11", "22", "33", "23", "13", "12"};
  std::vector<std::string> header{"step"};
  for (const char* n : names) header.push_back(std::string("eps") + n);
  for (const char* n : names) header.push_back(std::string("sigma") + n + "_oracle");
  for (const char* n : names) header.push_back(std::string("sigma") + n + "_surrogate");
  CsvWriter w(dir / "curves.csv", header);
  for (Eigen::Index t = 0; t < r.strain.rows(); ++t) {
    std::vector<double> row{double(t)};
    for (int c = 0; c < 6; ++c) row.push_back(r.strain(t, c));
    for (int c = 0; c < 6; ++c) row.push_back(r.oracle(t, c));
    for (int c = 0; c < 6; ++c) row.push_back(r.surrogate(t, c));
    w.row(row);
  }
  Json rmse = Json::object();
  for (int c = 0; c < 6; ++c) rmse[std::string("sigma") + names[c]] = r.rmse[c];
  const Json s = {{"rmse", rmse},
                  {"sigma_y", r.sigma_y},
                  {"forward_yield_von_mises", {{"oracle", r.oracle_forward_yield}, {"surrogate", r.surrogate_forward_yield}}},
                  {"reverse_yield_von_mises", {{"oracle", r.oracle_reverse_yield}, {"surrogate", r.surrogate_reverse_yield}}}};
  write_json_file((dir / "summary.json").string(), s);
  return s;
}

}  // namespace incde::experiments
