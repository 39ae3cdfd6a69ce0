#pragma once

#include <string>

#include <json.hpp>

#include "hdl/runner.hpp"

namespace hdl::cli {

using json = nlohmann::json;

bool has(const json& config, const std::string& pointer);
const json& field(const json& config, const std::string& pointer);
double number(const json& config, const std::string& pointer);
long long integer(const json& config, const std::string& pointer);
std::string text(const json& config, const std::string& pointer);
bool boolean(const json& config, const std::string& pointer);

inline void require(bool ok, const std::string& pointer, const std::string& message) {
  if (!ok) throw ConfigError(pointer, message);
}

}  // namespace hdl::cli
