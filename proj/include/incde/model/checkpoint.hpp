#pragma once

#include <filesystem>

#include "incde/core/json_util.hpp"
#include "incde/model/incde_model.hpp"

namespace incde::model {

Json architecture_to_json(const Architecture& a);
Architecture architecture_from_json(const Json& j, const std::string& context);

/// Writes dir/model.json (architecture, normalization, output mode, parameter
/// shapes, `extra` under "training") and dir/weights.f64 (parameters in
/// declared order, each row-major, little-endian float64).
void save_checkpoint(const IncdeModel& model, const std::filesystem::path& dir, const Json& extra = Json::object());
IncdeModel load_checkpoint(const std::filesystem::path& dir);

}  // namespace incde::model
