#include "incde/model/checkpoint.hpp"

#include "incde/core/binary_io.hpp"
#include "incde/core/errors.hpp"
#include "incde/datagen/material_json.hpp"

namespace incde::model {

namespace {

constexpr int kFormatVersion = 1;

Json parameter_shapes(const IncdeModel& m) {
  Json shapes = Json::array();
  const auto& nw = m.n_net();
  const auto& dw = m.decoder();
  auto add = [&](const std::string& net, const nn::Mlp& mlp) {
    for (int l = 0; l < mlp.n_layers(); ++l) {
      shapes.push_back({{"name", net + ".W" + std::to_string(l)}, {"rows", mlp.widths()[l]}, {"cols", mlp.widths()[l + 1]}});
      if (mlp.has_bias()) shapes.push_back({{"name", net + ".b" + std::to_string(l)}, {"rows", 1}, {"cols", mlp.widths()[l + 1]}});
    }
  };
  add("n_net", nw);
  add("decoder", dw);
  return shapes;
}

}  // namespace

Json architecture_to_json(const Architecture& a) {
  return {{"hidden_size", a.hidden_size},
          {"n_hidden", a.n_hidden},
          {"decoder_hidden", a.decoder_hidden},
          {"output_mode", datagen::to_string(a.mode)}};
}

Architecture architecture_from_json(const Json& j, const std::string& context) {
  Architecture a;
  a.hidden_size = json_get_or(j, "hidden_size", a.hidden_size, context);
  a.n_hidden = json_get_or(j, "n_hidden", a.n_hidden, context);
  a.decoder_hidden = json_get_or(j, "decoder_hidden", a.decoder_hidden, context);
  a.mode = datagen::output_mode_from_string(
      json_get_or<std::string>(j, "output_mode", datagen::to_string(a.mode), context));
  a.validate();
  return a;
}

void save_checkpoint(const IncdeModel& model, const std::filesystem::path& dir, const Json& extra) {
  std::filesystem::create_directories(dir);
  std::vector<double> flat;
  for (const nn::Parameter* p : model.parameters()) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = p->value;
    flat.insert(flat.end(), rm.data(), rm.data() + rm.size());
  }
  const Json meta = {{"format", "incde-checkpoint"},
                     {"version", kFormatVersion},
                     {"architecture", architecture_to_json(model.architecture())},
                     {"activations", {{"n_net", "elu hidden, tanh head, biases"},
                                      {"decoder", "elu hidden, identity head, no biases"}}},
                     {"norm", datagen::norm_to_json(model.norm())},
                     {"parameters", parameter_shapes(model)},
                     {"parameter_count", flat.size()},
                     {"dtype", "float64"},
                     {"endianness", "little"},
                     {"layout", "row-major, declared order"},
                     {"weights", "weights.f64"},
                     {"training", extra}};
  write_json_file((dir / "model.json").string(), meta);
  write_f64(dir / "weights.f64", flat);
}

IncdeModel load_checkpoint(const std::filesystem::path& dir) {
  const std::string ctx = (dir / "model.json").string();
  const Json meta = read_json_file(ctx);
  if (json_require<std::string>(meta, "format", ctx) != "incde-checkpoint") throw ConfigError(ctx + ": not a checkpoint");
  if (json_require<int>(meta, "version", ctx) != kFormatVersion) throw ConfigError(ctx + ": unsupported version");
  const Architecture arch = architecture_from_json(json_require<Json>(meta, "architecture", ctx), ctx + " architecture");
  const datagen::NormConstants norm = datagen::norm_from_json(json_require<Json>(meta, "norm", ctx), ctx + " norm");
  IncdeModel model(arch, norm, 0);
  if (parameter_shapes(model) != json_require<Json>(meta, "parameters", ctx))
    throw ConfigError(ctx + ": parameter shapes do not match the architecture");

  std::size_t count = 0;
  for (const nn::Parameter* p : model.parameters()) count += static_cast<std::size_t>(p->value.size());
  const std::vector<double> flat = read_f64(dir / json_get_or<std::string>(meta, "weights", "weights.f64", ctx), count);
  std::size_t at = 0;
  for (nn::Parameter* p : model.parameters()) {
    p->value = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data() + at, p->value.rows(), p->value.cols());
    p->zero_grad();
    at += static_cast<std::size_t>(p->value.size());
  }
  return model;
}

}  // namespace incde::model
