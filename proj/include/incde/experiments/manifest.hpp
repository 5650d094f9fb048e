#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "incde/core/json_util.hpp"

namespace incde::experiments {

/// Library version baked in at build time.
std::string version();

/// FNV-1a over the compact dump of a JSON value (keys are sorted by the
/// library, so equal configs hash equally).
std::uint64_t config_hash(const Json& config);
std::string hex(std::uint64_t v);

/// Record written next to every run's outputs. `command` plus `config` is
/// enough to re-run; `results` holds the headline numbers.
struct Manifest {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  double seconds = 0.0;

  Json to_json() const;
  static Manifest from_json(const Json& j);
};

void write_manifest(const Manifest& m, const std::filesystem::path& dir);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace incde::experiments
