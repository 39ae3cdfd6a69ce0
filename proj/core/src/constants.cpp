#include "hdl/constants.hpp"

#include <fstream>

#include "hdl/errors.hpp"

namespace hdl {

namespace {

constexpr const char* kNames[] = {"c_ball", "c_decay", "c_domination", "c_gcs", "c_str", "c_err", "c_uni", "c_J"};

double* field(Constants& c, const std::string& name) {
  if (name == "c_ball") return &c.c_ball;
  if (name == "c_decay") return &c.c_decay;
  if (name == "c_domination") return &c.c_domination;
  if (name == "c_gcs") return &c.c_gcs;
  if (name == "c_str") return &c.c_str;
  if (name == "c_err") return &c.c_err;
  if (name == "c_uni") return &c.c_uni;
  return &c.c_J;
}

}  // namespace

nlohmann::json to_json(const Constants& c) {
  nlohmann::json j;
  j["version"] = c.version;
  Constants copy = c;
  for (const char* name : kNames) j["constants"][name] = *field(copy, name);
  j["settings"] = c.settings;
  return j;
}

Constants constants_from_json(const nlohmann::json& j) {
  Constants c;
  if (!j.contains("version") || !j.at("version").is_string()) {
    throw InvalidArgument("constants: missing string field 'version'");
  }
  c.version = j.at("version").get<std::string>();
  if (!j.contains("constants")) throw InvalidArgument("constants: missing object 'constants'");
  const auto& values = j.at("constants");
  for (const char* name : kNames) {
    if (!values.contains(name) || !values.at(name).is_number()) {
      throw InvalidArgument(std::string("constants: missing numeric field 'constants.") + name + "'");
    }
    const double v = values.at(name).get<double>();
    if (!(v > 0.0)) throw InvalidArgument(std::string("constants: 'constants.") + name + "' must be positive");
    *field(c, name) = v;
  }
  if (j.contains("settings")) c.settings = j.at("settings");
  return c;
}

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("constants: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("constants: " + path + " is not valid JSON: " + e.what());
  }
  return constants_from_json(j);
}

void save_constants(const Constants& c, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("constants: cannot write " + path);
  out << to_json(c).dump(2) << '\n';
}

}  // namespace hdl
