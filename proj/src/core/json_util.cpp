#include "incde/core/json_util.hpp"

#include <fstream>

namespace incde {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace incde
