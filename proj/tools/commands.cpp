#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>

#include "incde/core/csv.hpp"
#include "incde/datagen/dataset.hpp"
#include "incde/datagen/material_json.hpp"
#include "incde/experiments/desk.hpp"
#include "incde/experiments/examples.hpp"
#include "incde/experiments/manifest.hpp"
#include "incde/experiments/svg_plot.hpp"
#include "incde/fem/benchmarks.hpp"
#include "incde/fem/problem_io.hpp"
#include "incde/fem/report.hpp"
#include "incde/model/checkpoint.hpp"
#include "incde/model/ncde_1d.hpp"
#include "incde/model/training.hpp"

namespace incde::cli {

namespace fs = std::filesystem;

Json merge_config(Json base, const Json& overrides) {
  if (!overrides.is_object()) return overrides.is_null() ? base : overrides;
  if (!base.is_object()) base = Json::object();
  for (auto it = overrides.begin(); it != overrides.end(); ++it)
    base[it.key()] = (it.value().is_object() && base.contains(it.key())) ? merge_config(base[it.key()], it.value())
                                                                         : it.value();
  return base;
}

void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& context) {
  if (j.is_null()) return;
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(context + ": unknown key \"" + it.key() + "\"");
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- gen-data ----------------------------------------------------------

Json gen_data(const Json& c, const fs::path& out) {
  const std::string ctx = "gen-data";
  check_keys(c, {"material", "n", "steps", "partitions", "seed", "walk"}, ctx);
  datagen::WalkConfig w;
  w.n_steps = json_get_or<int>(c, "steps", 100, ctx);
  w.seed = json_get_or<std::uint64_t>(c, "seed", 0, ctx);
  const Json walk = json_get_or<Json>(c, "walk", Json::object(), ctx);
  check_keys(walk, {"inc_max", "segment_min", "segment_max", "steps_per_segment", "max_bisections"}, ctx + ".walk");
  w.inc_max = json_get_or<double>(walk, "inc_max", w.inc_max, ctx);
  w.segment_min = json_get_or<int>(walk, "segment_min", w.segment_min, ctx);
  w.segment_max = json_get_or<int>(walk, "segment_max", w.segment_max, ctx);
  w.steps_per_segment = json_get_or<int>(walk, "steps_per_segment", w.steps_per_segment, ctx);
  w.max_bisections = json_get_or<int>(walk, "max_bisections", w.max_bisections, ctx);
  const auto preset = datagen::material_preset(json_get_or<std::string>(c, "material", "j2-iso", ctx));
  const int n = json_get_or<int>(c, "n", 1000, ctx);
  const int C = json_get_or<int>(c, "partitions", 4, ctx);
  const datagen::Dataset ds = datagen::build_dataset(preset, n, w, C);
  datagen::save_dataset(ds, out);
  return {{"samples", ds.n_samples}, {"steps", ds.n_steps}, {"material", ds.material_name}};
}

// ---- train -------------------------------------------------------------

model::Architecture architecture_from(const Json& j) {
  const std::string ctx = "train.architecture";
  check_keys(j, {"hidden_size", "n_hidden", "decoder_hidden"}, ctx);
  model::Architecture a;
  a.hidden_size = json_get_or<int>(j, "hidden_size", a.hidden_size, ctx);
  a.n_hidden = json_get_or<std::vector<int>>(j, "n_hidden", a.n_hidden, ctx);
  a.decoder_hidden = json_get_or<std::vector<int>>(j, "decoder_hidden", a.decoder_hidden, ctx);
  return a;
}

model::SolverConfig solver_from(const Json& j, model::SolverConfig d, const std::string& ctx) {
  check_keys(j, {"method", "dt"}, ctx);
  if (j.contains("method")) d.method = model::method_from_string(json_require<std::string>(j, "method", ctx));
  d.dt = json_get_or<double>(j, "dt", d.dt, ctx);
  d.validate();
  return d;
}

model::TrainConfig train_config_from(const Json& j) {
  const std::string ctx = "train.training";
  check_keys(j, {"epochs", "batch_size", "patience", "boundaries", "rates", "solver", "seed", "test_fraction"}, ctx);
  model::TrainConfig t;
  t.epochs = json_get_or<int>(j, "epochs", t.epochs, ctx);
  t.batch_size = json_get_or<int>(j, "batch_size", t.batch_size, ctx);
  t.patience = json_get_or<int>(j, "patience", t.patience, ctx);
  t.schedule.boundaries = json_get_or<std::vector<int>>(j, "boundaries", t.schedule.boundaries, ctx);
  t.schedule.rates = json_get_or<std::vector<double>>(j, "rates", t.schedule.rates, ctx);
  t.solver = solver_from(json_get_or<Json>(j, "solver", Json::object(), ctx + ".solver"), t.solver, ctx + ".solver");
  t.seed = json_get_or<std::uint64_t>(j, "seed", t.seed, ctx);
  t.test_fraction = json_get_or<double>(j, "test_fraction", t.test_fraction, ctx);
  t.validate();
  return t;
}

Json train(const Json& c, const fs::path& out) {
  const std::string ctx = "train";
  check_keys(c, {"data", "architecture", "training", "model_seed"}, ctx);
  const datagen::Dataset ds = datagen::load_dataset(json_require<std::string>(c, "data", ctx));
  model::Architecture arch = architecture_from(json_get_or<Json>(c, "architecture", Json::object(), ctx));
  arch.mode = ds.mode;
  const model::TrainConfig tc = train_config_from(json_get_or<Json>(c, "training", Json::object(), ctx));
  model::IncdeModel m(arch, ds.norm, json_get_or<std::uint64_t>(c, "model_seed", 0, ctx));

  fs::create_directories(out);
  CsvWriter loss(out / "loss.csv", {"epoch", "lr", "train_loss", "test_loss", "seconds"});
  const model::TrainResult r = model::train(m, ds, tc, [&](const model::EpochRecord& e) {
    loss.row({double(e.epoch), e.lr, e.train_loss, e.test_loss, e.seconds});
    std::cerr << "epoch " << e.epoch << " train " << e.train_loss << " test " << e.test_loss << "\n";
  });
  const Json summary = {{"best_epoch", r.best_epoch},
                        {"best_test_loss", r.best_test_loss},
                        {"zero_predictor_test_loss", r.zero_predictor_test_loss},
                        {"epochs_run", r.history.size()},
                        {"stopped_early", r.stopped_early}};
  model::save_checkpoint(m, out / "checkpoint",
                         {{"material_name", ds.material_name}, {"material", ds.material}, {"result", summary}});
  return summary;
}

// ---- eval --------------------------------------------------------------

oracle::OracleParams material_for_eval(const Json& c, const fs::path& checkpoint, const std::string& ctx) {
  if (c.contains("material")) {
    const Json& m = c.at("material");
    if (m.is_string()) return datagen::material_preset(m.get<std::string>()).params;
    return datagen::material_from_json(m);
  }
  const Json meta = read_json_file((checkpoint / "model.json").string());
  const Json training = meta.value("training", Json::object());
  if (!training.contains("material") || training["material"].empty())
    throw ConfigError(ctx + ": missing required key \"material\" (the checkpoint does not record one)");
  return datagen::material_from_json(training["material"]);
}

Json eval(const std::string& which, const Json& c, const fs::path& out) {
  const std::string ctx = "eval " + which;
  check_keys(c, {"model", "material", "solver", "n_protocols", "base_steps", "z_steps", "n_z_protocols", "seed",
                 "histogram_bins", "reference", "dts", "component_step", "peak"},
             ctx);
  const fs::path ckpt = json_require<std::string>(c, "model", ctx);
  const model::IncdeModel m = model::load_checkpoint(ckpt);
  const oracle::OracleParams truth = material_for_eval(c, ckpt, ctx);
  const Json solver = json_get_or<Json>(c, "solver", Json::object(), ctx);
  experiments::Example2Config e2;
  e2.component_step = json_get_or<double>(c, "component_step", e2.component_step, ctx);
  e2.peak = json_get_or<double>(c, "peak", e2.peak, ctx);
  if (which == "example1") {
    experiments::Example1Config e1;
    e1.n_protocols = json_get_or<int>(c, "n_protocols", e1.n_protocols, ctx);
    e1.base_steps = json_get_or<std::vector<double>>(c, "base_steps", e1.base_steps, ctx);
    e1.z_steps = json_get_or<std::vector<double>>(c, "z_steps", e1.z_steps, ctx);
    e1.n_z_protocols = json_get_or<int>(c, "n_z_protocols", e1.n_z_protocols, ctx);
    e1.seed = json_get_or<std::uint64_t>(c, "seed", e1.seed, ctx);
    e1.histogram_bins = json_get_or<int>(c, "histogram_bins", e1.histogram_bins, ctx);
    e1.solver = solver_from(solver, e1.solver, ctx + ".solver");
    return experiments::write_example1(experiments::example1(m, truth, e1), out);
  }
  if (which == "example2") {
    e2.dts = json_get_or<std::vector<double>>(c, "dts", e2.dts, ctx);
    e2.reference = solver_from(json_get_or<Json>(c, "reference", Json::object(), ctx), e2.reference, ctx + ".reference");
    return experiments::write_example2(experiments::example2(m, &truth, e2), out);
  }
  if (which == "example3") {
    const model::SolverConfig s = solver_from(solver, {model::Method::rk4, 0.1}, ctx + ".solver");
    return experiments::write_example3(experiments::example3(m, truth, s, e2), out);
  }
  throw ConfigError("eval: unknown example \"" + which + "\" (expected example1, example2 or example3)");
}

// ---- 1D comparison -----------------------------------------------------

Json compare_1d(const Json& c, const fs::path& out) {
  const std::string ctx = "compare-1d";
  check_keys(c, {"epochs", "seed"}, ctx);
  model::Fit1dConfig cfg;
  cfg.epochs = json_get_or<int>(c, "epochs", cfg.epochs, ctx);
  cfg.seed = json_get_or<std::uint64_t>(c, "seed", cfg.seed, ctx);
  const auto eps = model::bilinear_strain(), sig = model::bilinear_stress();
  fs::create_directories(out);
  Json s = Json::object();
  std::vector<model::Fit1dResult> fits;
  for (model::Kind1d k : {model::Kind1d::incde, model::Kind1d::ncde}) {
    fits.push_back(model::fit_1d(k, eps, sig, cfg));
    s[model::to_string(k)] = {{"final_mse", fits.back().final_mse}, {"max_error", fits.back().max_error}};
  }
  CsvWriter pts(out / "points.csv", {"eps", "sigma", "incde", "ncde", "incde_abs_error", "ncde_abs_error"});
  for (std::size_t i = 0; i < eps.size(); ++i)
    pts.row({eps[i], sig[i], fits[0].prediction[i], fits[1].prediction[i], fits[0].abs_error[i], fits[1].abs_error[i]});
  CsvWriter hist(out / "loss.csv", {"epoch", "incde", "ncde"});
  for (std::size_t e = 0; e < fits[0].loss_history.size(); ++e)
    hist.row({double(e), fits[0].loss_history[e], fits[1].loss_history[e]});
  write_json_file((out / "summary.json").string(), s);
  return s;
}

// ---- solve-bvp ---------------------------------------------------------

Json solve_bvp(const Json& c, const fs::path& out) {
  const std::string ctx = "solve-bvp";
  const fem::ProblemFile pf = fem::problem_from_json(c);
  const auto material = fem::make_material(pf.material);
  const fem::BvpResult r = fem::run_bvp(pf.problem, *material, [](const fem::StepRecord& s) {
    std::cerr << "step " << s.step << " iterations " << s.iterations << " residual " << s.residual << "\n";
  });
  fem::save_bvp(r, pf.problem.mesh, out);
  int iterations = 0;
  for (const auto& s : r.steps) iterations += s.iterations;
  const Json summary = {{"completed", r.completed}, {"steps", r.steps.size()},   {"failed_step", r.failed_step},
                        {"failure", r.failure},     {"iterations", iterations}, {"seconds", r.seconds}};
  if (!r.completed) throw NumericalError(ctx + ": " + r.failure);
  return summary;
}

// ---- report ------------------------------------------------------------

Json report(const Json& c, const fs::path& out) {
  const std::string ctx = "report";
  check_keys(c, {"reference", "surrogate"}, ctx);
  fem::Mesh mesh;
  const fem::BvpResult ref = fem::load_bvp(json_require<std::string>(c, "reference", ctx), &mesh);
  const fem::BvpResult sur = fem::load_bvp(json_require<std::string>(c, "surrogate", ctx));
  return fem::write_comparison(ref, sur, mesh, out);
}

// ---- plot --------------------------------------------------------------

Json plot(const Json& c, const fs::path& out) {
  const std::string ctx = "plot";
  check_keys(c, {"csv", "x", "y", "group", "log_x", "log_y", "title"}, ctx);
  experiments::PlotSpec spec;
  spec.log_x = json_get_or<bool>(c, "log_x", false, ctx);
  spec.log_y = json_get_or<bool>(c, "log_y", false, ctx);
  spec.title = json_get_or<std::string>(c, "title", "", ctx);
  spec.x_label = json_require<std::string>(c, "x", ctx);
  const auto y = json_require<std::vector<std::string>>(c, "y", ctx);
  spec.y_label = y.size() == 1 ? y.front() : "";
  experiments::plot_csv(json_require<std::string>(c, "csv", ctx), spec.x_label, y,
                        json_get_or<std::string>(c, "group", "", ctx), spec, out);
  return {{"svg", out.string()}};
}

// ---- grid --------------------------------------------------------------

Json grid(const Json& c, const fs::path& out) {
  const std::string ctx = "grid";
  check_keys(c, {"data", "hidden_size", "width", "depth", "training", "run"}, ctx);
  const auto hs = json_get_or<std::vector<int>>(c, "hidden_size", {16, 32}, ctx);
  const auto ws = json_get_or<std::vector<int>>(c, "width", {32, 64}, ctx);
  const auto ds = json_get_or<std::vector<int>>(c, "depth", {3}, ctx);
  const bool run = json_get_or<bool>(c, "run", false, ctx);
  fs::create_directories(out);
  CsvWriter w(out / "grid.csv", {"hidden_size", "width", "depth", "best_test_loss", "best_epoch"});
  Json rows = Json::array();
  for (int h : hs)
    for (int wd : ws)
      for (int d : ds) {
        double best = std::nan(""), epoch = std::nan("");
        if (run) {
          const Json tc = {{"data", json_require<std::string>(c, "data", ctx)},
                           {"architecture",
                            {{"hidden_size", h},
                             {"n_hidden", std::vector<int>(d, wd)},
                             {"decoder_hidden", std::vector<int>(d + 1, wd)}}},
                           {"training", json_get_or<Json>(c, "training", Json::object(), ctx)}};
          const fs::path sub = out / ("h" + std::to_string(h) + "_w" + std::to_string(wd) + "_d" + std::to_string(d));
          const Json r = train(tc, sub);
          best = r["best_test_loss"];
          epoch = r["best_epoch"];
        }
        w.row({double(h), double(wd), double(d), best, epoch});
        rows.push_back({{"hidden_size", h}, {"width", wd}, {"depth", d}});
      }
  return {{"combinations", rows.size()}, {"trained", run}};
}

// ---- run-all -----------------------------------------------------------

/// Desk-scale pipeline: data, training, the three examples on the trained
/// model, and the plate with the oracle and the surrogate.
Json run_all(const Json& c, const fs::path& out) {
  const std::string ctx = "run-all";
  check_keys(c, {"gen-data", "train", "example1", "example2", "plate", "plate_solver"}, ctx);
  const experiments::DeskSettings desk = experiments::desk_settings();
  const Json desk_data = {{"material", "j2-iso"},
                          {"n", desk.samples},
                          {"steps", desk.walk.n_steps},
                          {"partitions", desk.partitions},
                          {"seed", desk.data_seed}};
  const Json desk_train = {{"architecture",
                            {{"hidden_size", desk.architecture.hidden_size},
                             {"n_hidden", desk.architecture.n_hidden},
                             {"decoder_hidden", desk.architecture.decoder_hidden}}},
                           {"training",
                            {{"epochs", desk.training.epochs},
                             {"batch_size", desk.training.batch_size},
                             {"rates", desk.training.schedule.rates}}},
                           {"model_seed", desk.model_seed}};
  Json results = Json::object();
  auto step = [&](const std::string& name, const std::string& command, const Json& config, const fs::path& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::cerr << "== " << name << "\n";
    experiments::Manifest mf{command, config, run_command(command, config, dir), 0.0};
    mf.seconds = seconds_since(t0);
    experiments::write_manifest(mf, dir);
    results[name] = mf.results;
  };
  const Json data_cfg = merge_config(desk_data, json_get_or<Json>(c, "gen-data", Json::object(), ctx));
  step("gen-data", "gen-data", data_cfg, out / "data");
  Json train_cfg = merge_config(desk_train, json_get_or<Json>(c, "train", Json::object(), ctx));
  train_cfg["data"] = (out / "data").string();
  step("train", "train", train_cfg, out / "train");
  const std::string ckpt = (out / "train" / "checkpoint").string();
  step("example1", "eval example1",
       merge_config({{"model", ckpt}}, json_get_or<Json>(c, "example1", Json::object(), ctx)), out / "example1");
  step("example2", "eval example2",
       merge_config({{"model", ckpt}}, json_get_or<Json>(c, "example2", Json::object(), ctx)), out / "example2");
  step("example3", "eval example3", {{"model", ckpt}}, out / "example3");
  const Json plate = json_get_or<Json>(c, "plate", Json{{"n_circ", 12}, {"n_rad", 12}, {"steps_per_unit", 5}}, ctx);
  const Json sur_material = merge_config({{"type", "checkpoint"}, {"path", ckpt}},
                                         json_get_or<Json>(c, "plate_solver", Json::object(), ctx));
  step("plate-oracle", "solve-bvp", {{"benchmark", "plate"}, {"options", plate}}, out / "plate_oracle");
  step("plate-surrogate", "solve-bvp", {{"benchmark", "plate"}, {"options", plate}, {"material", sur_material}},
       out / "plate_surrogate");
  step("plate-report", "report",
       {{"reference", (out / "plate_oracle").string()}, {"surrogate", (out / "plate_surrogate").string()}},
       out / "plate_report");
  return results;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"gen-data",      "train",      "eval example1", "eval example2",
                                              "eval example3",  "compare-1d", "solve-bvp",     "report",
                                              "plot",           "grid",       "run-all"};
  return names;
}

Json run_command(const std::string& command, const Json& config, const fs::path& out) {
  if (command == "gen-data") return gen_data(config, out);
  if (command == "train") return train(config, out);
  if (command.rfind("eval ", 0) == 0) return eval(command.substr(5), config, out);
  if (command == "compare-1d") return compare_1d(config, out);
  if (command == "solve-bvp") return solve_bvp(config, out);
  if (command == "report") return report(config, out);
  if (command == "plot") return plot(config, out);
  if (command == "grid") return grid(config, out);
  if (command == "run-all") return run_all(config, out);
  throw ConfigError("unknown command \"" + command + "\"");
}

}  // namespace incde::cli
