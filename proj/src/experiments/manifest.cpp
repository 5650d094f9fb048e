#include "incde/experiments/manifest.hpp"

#include <cstdio>

#include "incde/core/parallel.hpp"

#ifndef INCDE_VERSION
#define INCDE_VERSION "0.0.0"
#endif

namespace incde::experiments {

std::string version() { return INCDE_VERSION; }

std::uint64_t config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json Manifest::to_json() const {
  return {{"format", "incde-manifest"},
          {"version", 1},
          {"library_version", version()},
          {"command", command},
          {"config", config},
          {"config_hash", hex(config_hash(config))},
          {"threads", thread_count()},
          {"seconds", seconds},
          {"results", results}};
}

Manifest Manifest::from_json(const Json& j) {
  const std::string ctx = "manifest";
  if (json_get_or<std::string>(j, "format", "", ctx) != "incde-manifest")
    throw ConfigError("manifest: \"format\" must be \"incde-manifest\"");
  Manifest m;
  m.command = json_require<std::string>(j, "command", ctx);
  m.config = json_require<Json>(j, "config", ctx);
  m.results = json_get_or<Json>(j, "results", Json::object(), ctx);
  m.seconds = json_get_or<double>(j, "seconds", 0.0, ctx);
  return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json_file((dir / "manifest.json").string(), m.to_json());
}

Manifest read_manifest(const std::filesystem::path& path) {
  return Manifest::from_json(read_json_file(path.string()));
}

}  // namespace incde::experiments
