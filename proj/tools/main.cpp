#include <chrono>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "incde/core/errors.hpp"
#include "incde/experiments/manifest.hpp"

namespace fs = std::filesystem;
using incde::Json;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

/// Flag values that were given on the command line, keyed like the config.
struct Overrides {
  Json values = Json::object();

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, T& storage, const std::string& help) {
    app->add_option(flag, storage, help);
    setters.push_back([this, app, flag, key, &storage] {
      if (app->count(flag.substr(0, flag.find(','))) > 0) values[key] = storage;
    });
  }
  Json collect() {
    for (auto& s : setters) s();
    return values;
  }
  std::vector<std::function<void()>> setters;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  return incde::read_json_file(path);
}

int execute(const std::string& command, const Json& config, const fs::path& out, bool manifest_beside) {
  const auto t0 = std::chrono::steady_clock::now();
  incde::experiments::Manifest m{command, config, incde::cli::run_command(command, config, out), 0.0};
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (manifest_beside) {
    incde::write_json_file(out.string() + ".manifest.json", m.to_json());
  } else {
    incde::experiments::write_manifest(m, out);
  }
  std::cout << m.results.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental neural controlled differential equation surrogates for plasticity"};
  app.require_subcommand(1);
  std::string config_path, out;

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a random-walk dataset labelled by return mapping");
  Overrides gen_o;
  std::string material;
  int n = 0, steps = 0, partitions = 0;
  std::uint64_t seed = 0;
  gen->add_option("--config", config_path, "JSON config");
  gen->add_option("--out", out, "Output directory")->required();
  gen_o.add(gen, "--material", "material", material, "j2-iso, j2-combined, dp or dp-decomp");
  gen_o.add(gen, "--n", "n", n, "Number of samples");
  gen_o.add(gen, "--steps", "steps", steps, "Rows per walk");
  gen_o.add(gen, "--partitions", "partitions", partitions, "Sub-increments per increment");
  gen_o.add(gen, "--seed", "seed", seed, "Generator seed");

  // train
  auto* tr = app.add_subcommand("train", "Train a model on a dataset");
  Overrides tr_o;
  std::string data;
  tr->add_option("--config", config_path, "JSON config");
  tr->add_option("--out", out, "Output directory")->required();
  tr_o.add(tr, "--data", "data", data, "Dataset directory");

  // eval
  auto* ev = app.add_subcommand("eval", "Run example1, example2 or example3 on a checkpoint");
  Overrides ev_o;
  std::string example, model_dir, method;
  double dt = 0.0;
  ev->add_option("example", example, "example1, example2 or example3")->required();
  ev->add_option("--config", config_path, "JSON config");
  ev->add_option("--out", out, "Output directory")->required();
  ev_o.add(ev, "--model", "model", model_dir, "Checkpoint directory");
  ev_o.add(ev, "--material", "material", material, "Oracle preset (defaults to the checkpoint's)");
  ev_o.add(ev, "--method", "solver/method", method, "ODE method");
  ev_o.add(ev, "--dt", "solver/dt", dt, "ODE step");

  // compare-1d
  auto* c1 = app.add_subcommand("compare-1d", "Fit the 1D incremental model and a plain neural CDE");
  Overrides c1_o;
  int epochs = 0;
  c1->add_option("--config", config_path, "JSON config");
  c1->add_option("--out", out, "Output directory")->required();
  c1_o.add(c1, "--epochs", "epochs", epochs, "Training epochs");
  c1_o.add(c1, "--seed", "seed", seed, "Initialization seed");

  // solve-bvp
  auto* bvp = app.add_subcommand("solve-bvp", "Solve a benchmark or a problem file");
  Overrides bvp_o;
  std::string benchmark, checkpoint, iteration, options;
  bvp->add_option("benchmark", benchmark, "coupon, plate or shear (omit with --config)");
  bvp->add_option("--config", config_path, "Problem file");
  bvp->add_option("--out", out, "Output directory")->required();
  std::string material_kind;
  bvp->add_option("--material", material_kind, "oracle or checkpoint")->check(CLI::IsMember({"oracle", "checkpoint"}));
  bvp->add_option("--checkpoint", checkpoint, "Checkpoint directory for --material checkpoint");
  bvp->add_option("--method", method, "ODE method of the surrogate");
  bvp->add_option("--dt", dt, "ODE step of the surrogate");
  bvp_o.add(bvp, "--iteration", "solver/method", iteration, "broyden or newton");
  bvp->add_option("--options", options, "Benchmark options as a JSON object");

  // report
  auto* rep = app.add_subcommand("report", "Compare a surrogate BVP run with a reference run");
  Overrides rep_o;
  std::string reference, surrogate;
  rep->add_option("--config", config_path, "JSON config");
  rep->add_option("--out", out, "Output directory")->required();
  rep_o.add(rep, "--reference", "reference", reference, "Reference run directory");
  rep_o.add(rep, "--surrogate", "surrogate", surrogate, "Surrogate run directory");

  // plot
  auto* pl = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  Overrides pl_o;
  std::string csv, x, group, title;
  std::vector<std::string> y;
  bool log_x = false, log_y = false;
  pl->add_option("--config", config_path, "JSON config");
  pl->add_option("--out", out, "Output SVG file")->required();
  pl_o.add(pl, "--csv", "csv", csv, "Input CSV");
  pl_o.add(pl, "--x", "x", x, "x column");
  pl_o.add(pl, "--y", "y", y, "y columns");
  pl_o.add(pl, "--group", "group", group, "Column whose values split the lines");
  pl_o.add(pl, "--title", "title", title, "Chart title");
  pl->add_flag("--log-x", log_x, "Logarithmic x axis");
  pl->add_flag("--log-y", log_y, "Logarithmic y axis");

  // grid
  auto* gr = app.add_subcommand("grid", "List (and optionally train) architecture combinations");
  Overrides gr_o;
  bool run = false;
  gr->add_option("--config", config_path, "JSON config");
  gr->add_option("--out", out, "Output directory")->required();
  gr_o.add(gr, "--data", "data", data, "Dataset directory");
  gr->add_flag("--run", run, "Train every combination");

  // run-all
  auto* all = app.add_subcommand("run-all", "Desk-scale pipeline from data to the plate report");
  all->add_option("--config", config_path, "JSON config overriding the desk defaults");
  all->add_option("--out", out, "Output directory")->required();

  // rerun
  auto* re = app.add_subcommand("rerun", "Repeat a run from its manifest");
  std::string manifest;
  re->add_option("manifest", manifest, "manifest.json")->required();
  re->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    auto with = [&](Overrides& o) {
      Json overrides = Json::object();
      const Json given = o.collect();
      for (auto& [k, v] : given.items()) {
        const auto slash = k.find('/');
        if (slash == std::string::npos) overrides[k] = v;
        else overrides[k.substr(0, slash)][k.substr(slash + 1)] = v;
      }
      return incde::cli::merge_config(load_config(config_path), overrides);
    };
    if (*gen) return execute("gen-data", with(gen_o), out, false);
    if (*tr) return execute("train", with(tr_o), out, false);
    if (*ev) return execute("eval " + example, with(ev_o), out, false);
    if (*c1) return execute("compare-1d", with(c1_o), out, false);
    if (*bvp) {
      Json cfg = with(bvp_o);
      if (!benchmark.empty()) cfg["benchmark"] = benchmark;
      if (!options.empty()) cfg["options"] = Json::parse(options);
      if (!material_kind.empty() || !checkpoint.empty()) {
        if (material_kind == "checkpoint" || (material_kind.empty() && !checkpoint.empty())) {
          if (checkpoint.empty()) throw incde::ConfigError("solve-bvp: --material checkpoint needs --checkpoint DIR");
          cfg["material"] = {{"type", "checkpoint"}, {"path", fs::absolute(checkpoint).string()}};
          if (!method.empty()) cfg["material"]["method"] = method;
          if (dt > 0.0) cfg["material"]["dt"] = dt;
        } else {
          cfg.erase("material");
        }
      }
      return execute("solve-bvp", cfg, out, false);
    }
    if (*rep) return execute("report", with(rep_o), out, false);
    if (*pl) {
      Json cfg = with(pl_o);
      if (log_x) cfg["log_x"] = true;
      if (log_y) cfg["log_y"] = true;
      return execute("plot", cfg, out, true);
    }
    if (*gr) {
      Json cfg = with(gr_o);
      if (run) cfg["run"] = true;
      return execute("grid", cfg, out, false);
    }
    if (*all) return execute("run-all", load_config(config_path), out, false);
    if (*re) {
      const auto m = incde::experiments::read_manifest(manifest);
      return execute(m.command, m.config, out, m.command == "plot");
    }
  } catch (const incde::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const incde::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
