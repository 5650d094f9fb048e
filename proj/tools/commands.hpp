#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "incde/core/json_util.hpp"

namespace incde::cli {

/// Every subcommand is a function of (config, output path). The CLI layer only
/// turns flags into config keys, so a manifest's command and config replay the
/// run exactly.
Json run_command(const std::string& command, const Json& config, const std::filesystem::path& out);

/// Commands accepted by run_command.
const std::vector<std::string>& command_names();

/// Overlays `overrides` onto `base` key by key (objects merge recursively).
Json merge_config(Json base, const Json& overrides);

/// Rejects keys outside `allowed`, naming the first offender.
void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& context);

}  // namespace incde::cli
