#pragma once

#include <string>

#include "incde/core/errors.hpp"
#include "json.hpp"

namespace incde {

using Json = nlohmann::json;

/// Required key; the error names the key and the enclosing context.
template <class T>
T json_require(const Json& j, const std::string& key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(context + ": missing required key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(context + ": key \"" + key + "\" has the wrong type (" + e.what() + ")");
  }
}

template <class T>
T json_get_or(const Json& j, const std::string& key, const T& fallback, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return json_require<T>(j, key, context);
}

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace incde
