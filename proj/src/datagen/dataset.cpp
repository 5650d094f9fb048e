#include "incde/datagen/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "incde/core/binary_io.hpp"
#include "incde/core/parallel.hpp"

namespace incde::datagen {

namespace {

constexpr int kFormatVersion = 1;

std::size_t row_offset(int i, int t, int n_steps) {
  return (static_cast<std::size_t>(i) * n_steps + t) * 6;
}

}  // namespace

SeriesMatrix Dataset::strain_series(int i) const {
  return Eigen::Map<const SeriesMatrix>(strain.data() + row_offset(i, 0, n_steps), n_steps, 6);
}

SeriesMatrix Dataset::stress_series(int i) const {
  SeriesMatrix s = Eigen::Map<const SeriesMatrix>(stress.data() + row_offset(i, 0, n_steps), n_steps, 6);
  if (mode == OutputMode::pressure_deviatoric) {
    for (int t = 0; t < n_steps; ++t) s.row(t).head<3>().array() += pressure[static_cast<std::size_t>(i) * n_steps + t];
  }
  return s;
}

Eigen::MatrixXd Dataset::normalized_targets(int i) const {
  const int d = output_dim(mode);
  const Eigen::VectorXd scale = norm.output_scale(mode);
  Eigen::MatrixXd out(n_steps, d);
  for (int t = 0; t < n_steps; ++t) {
    const std::size_t r = row_offset(i, t, n_steps);
    if (mode == OutputMode::full) {
      for (int k = 0; k < 6; ++k) out(t, k) = stress[r + k] * scale[k];
    } else {
      out(t, 0) = pressure[static_cast<std::size_t>(i) * n_steps + t] * scale[0];
      for (int k = 0; k < 6; ++k) out(t, k + 1) = stress[r + k] * scale[k + 1];
    }
  }
  return out;
}

Dataset Dataset::subset(int begin, int count) const {
  if (begin < 0 || count < 0 || begin + count > n_samples) throw ConfigError("dataset subset out of range");
  Dataset d = *this;
  d.n_samples = count;
  const auto rows = static_cast<std::size_t>(n_steps);
  auto slice = [&](const std::vector<double>& v, std::size_t width) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(begin * rows * width),
                               v.begin() + static_cast<std::ptrdiff_t>((begin + count) * rows * width));
  };
  d.strain = slice(strain, 6);
  d.stress = slice(stress, 6);
  if (mode == OutputMode::pressure_deviatoric) d.pressure = slice(pressure, 1);
  return d;
}

void Dataset::check_shapes() const {
  const auto n = static_cast<std::size_t>(n_samples) * n_steps;
  if (n_samples < 0 || n_steps < 0 || strain.size() != n * 6 || stress.size() != n * 6)
    throw ConfigError("dataset arrays do not match n_samples x n_steps x 6");
  if (mode == OutputMode::pressure_deviatoric ? pressure.size() != n : !pressure.empty())
    throw ConfigError("dataset pressure array does not match its output mode");
}

NormConstants compute_norm_constants(const Dataset& ds) {
  ds.check_shapes();
  if (ds.n_samples == 0 || ds.n_steps == 0) throw NumericalError("cannot normalize an empty dataset");
  NormConstants nc;
  nc.sigma_axial_max = nc.sigma_shear_max = nc.p_max = 0.0;
  nc.eps_max.fill(0.0);
  const std::size_t rows = ds.strain.size() / 6;
  for (std::size_t r = 0; r < rows; ++r) {
    for (int k = 0; k < 6; ++k) {
      nc.eps_max[k] = std::max(nc.eps_max[k], std::abs(ds.strain[r * 6 + k]));
      double& target = k < 3 ? nc.sigma_axial_max : nc.sigma_shear_max;
      target = std::max(target, std::abs(ds.stress[r * 6 + k]));
    }
  }
  for (double p : ds.pressure) nc.p_max = std::max(nc.p_max, std::abs(p));
  if (ds.mode == OutputMode::full) {
    // Unused in this mode; kept positive so the constants stay valid.
    if (nc.p_max == 0.0) nc.p_max = 1.0;
  }
  nc.validate(ds.mode);
  return nc;
}

Dataset build_dataset(const MaterialPreset& material, int N, const WalkConfig& walk, int C) {
  if (N <= 0) throw ConfigError("build_dataset: N must be >= 1");
  if (C <= 0) throw ConfigError("build_dataset: C must be >= 1");
  walk.validate();

  Dataset ds;
  ds.n_samples = N;
  ds.n_steps = walk.n_steps * C;
  ds.mode = material.mode;
  ds.partitions = C;
  ds.raw_steps = walk.n_steps;
  ds.seed = walk.seed;
  ds.material_name = material.name;
  ds.material = material_to_json(material.params);

  const auto n = static_cast<std::size_t>(N) * ds.n_steps;
  ds.strain.assign(n * 6, 0.0);
  ds.stress.assign(n * 6, 0.0);
  if (ds.mode == OutputMode::pressure_deviatoric) ds.pressure.assign(n, 0.0);

  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    const StrainSeries eps = partition_series(random_walk_series(walk, material.params, i), C);
    StressSeries sig;
    try {
      sig = oracle::oracle_stress_series(material.params, eps);
    } catch (const NumericalError& e) {
      throw NumericalError("sample " + std::to_string(i) + ": " + e.what());
    }
    const std::size_t base = i * static_cast<std::size_t>(ds.n_steps);
    for (int t = 0; t < ds.n_steps; ++t) {
      for (int k = 0; k < 6; ++k) ds.strain[(base + t) * 6 + k] = eps(t, k);
      if (ds.mode == OutputMode::full) {
        for (int k = 0; k < 6; ++k) ds.stress[(base + t) * 6 + k] = sig(t, k);
      } else {
        const auto pd = mech::pressure_deviator(mech::Stress(mech::Vec6(sig.row(t).transpose())));
        ds.pressure[base + t] = pd.p;
        for (int k = 0; k < 6; ++k) ds.stress[(base + t) * 6 + k] = pd.s[k];
      }
    }
  });

  ds.norm = compute_norm_constants(ds);
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  ds.check_shapes();
  std::filesystem::create_directories(dir);
  Json files = {{"strain", "strain.f64"}, {"stress", "stress.f64"}};
  if (ds.mode == OutputMode::pressure_deviatoric) files["pressure"] = "pressure.f64";
  const Json meta = {{"format", "incde-dataset"},
                     {"version", kFormatVersion},
                     {"n_samples", ds.n_samples},
                     {"n_steps", ds.n_steps},
                     {"components", 6},
                     {"mode", to_string(ds.mode)},
                     {"stress_kind", ds.mode == OutputMode::full ? "full" : "deviatoric"},
                     {"partitions", ds.partitions},
                     {"raw_steps", ds.raw_steps},
                     {"seed", ds.seed},
                     {"material_name", ds.material_name},
                     {"material", ds.material},
                     {"norm", norm_to_json(ds.norm)},
                     {"dtype", "float64"},
                     {"endianness", "little"},
                     {"layout", "[sample][step][component]"},
                     {"files", files}};
  write_json_file((dir / "meta.json").string(), meta);
  write_f64(dir / "strain.f64", ds.strain);
  write_f64(dir / "stress.f64", ds.stress);
  if (ds.mode == OutputMode::pressure_deviatoric) write_f64(dir / "pressure.f64", ds.pressure);
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const Json meta = read_json_file((dir / "meta.json").string());
  const std::string ctx = (dir / "meta.json").string();
  if (json_require<std::string>(meta, "format", ctx) != "incde-dataset")
    throw ConfigError(ctx + ": not an incde dataset");
  if (json_require<int>(meta, "version", ctx) != kFormatVersion) throw ConfigError(ctx + ": unsupported version");

  Dataset ds;
  ds.n_samples = json_require<int>(meta, "n_samples", ctx);
  ds.n_steps = json_require<int>(meta, "n_steps", ctx);
  ds.mode = output_mode_from_string(json_require<std::string>(meta, "mode", ctx));
  ds.partitions = json_get_or(meta, "partitions", 1, ctx);
  ds.raw_steps = json_get_or(meta, "raw_steps", ds.n_steps, ctx);
  ds.seed = json_get_or<std::uint64_t>(meta, "seed", 0, ctx);
  ds.material_name = json_get_or<std::string>(meta, "material_name", "", ctx);
  ds.material = meta.value("material", Json::object());

  ds.norm = norm_from_json(json_require<Json>(meta, "norm", ctx), ctx + " norm");

  const auto n = static_cast<std::size_t>(ds.n_samples) * ds.n_steps;
  ds.strain = read_f64(dir / "strain.f64", n * 6);
  ds.stress = read_f64(dir / "stress.f64", n * 6);
  if (ds.mode == OutputMode::pressure_deviatoric) ds.pressure = read_f64(dir / "pressure.f64", n);
  ds.check_shapes();
  return ds;
}

}  // namespace incde::datagen
