#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hdl::cli {

/// A configuration that does not match the documented schema. `path` is a
/// JSON pointer into the effective configuration.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A suite finished but one of its numerical invariants does not hold.
class InvariantFailure : public std::runtime_error {
 public:
  InvariantFailure(std::string invariant, const std::string& detail)
      : std::runtime_error("invariant '" + invariant + "' failed: " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

inline const std::vector<std::string> kCommands{"identities", "counting", "decompose", "embed",
                                                "interval",   "counterexample", "calibrate"};

/// Built-in configuration of a command; user configs are merged over it.
nlohmann::json default_config(const std::string& command);

/// defaults(command) merged with `user` (objects recursively, everything
/// else replaced). Throws ConfigError on unknown commands or a mismatching
/// "command" field.
nlohmann::json effective_config(const std::string& command, const nlohmann::json& user);

/// Checks types and ranges of every field the command reads.
void validate_config(const std::string& command, const nlohmann::json& config);

struct RunOptions {
  std::string command;
  nlohmann::json config = nlohmann::json::object();  // user config (merged over defaults)
  std::string out_dir = ".";
  unsigned threads = 0;  // 0 keeps the current setting
  bool use_cache = true;
  std::string constants_path = HDL_DEFAULT_CONSTANTS;
};

struct RunOutcome {
  int exit_code = 0;  // 0 success, 1 invariant failure, 2 invalid input
  std::string message;
  std::vector<std::string> files;  // report files written to out_dir
  bool cache_hit = false;
  std::string digest;
};

/// Runs one command: validates, checks the cache, evaluates, writes
/// <out>/<command>.json (and .csv where the command has tabular output).
/// Never throws for input or invariant problems; those become exit codes.
RunOutcome run(const RunOptions& options);

std::string sha256_hex(const std::string& bytes);

}  // namespace hdl::cli
