#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "hdl/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hdl: experiments on counting forms, Gowers norms and box embeddings in planar sets"};
  std::string config_path;
  hdl::cli::RunOptions options;
  bool no_cache = false;
  app.add_option("--config", config_path, "JSON configuration merged over the command defaults");
  app.add_option("--out", options.out_dir, "output directory for reports and the cache")->capture_default_str();
  app.add_option("--threads", options.threads, "worker threads (0 keeps the hardware default)");
  app.add_flag("--no-cache", no_cache, "ignore and do not update the result cache");
  app.add_option("--constants", options.constants_path, "constants file (written by calibrate)")->capture_default_str();
  const std::map<std::string, std::string> about{
      {"identities", "Gaussian convolution identities and the heat equation"},
      {"counting", "sharp or smoothed hypercube counting form of a set"},
      {"decompose", "structured, error and uniform parts over a scale ladder"},
      {"embed", "search for an isometric box copy, or scan over scales"},
      {"interval", "pigeonhole scale selection on a set of density >= delta"},
      {"counterexample", "exact 1-D sets that avoid a distance"},
      {"calibrate", "recompute and write the constants file"},
  };
  for (const auto& name : hdl::cli::kCommands) app.add_subcommand(name, about.at(name))->fallthrough();
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  options.command = app.get_subcommands().front()->get_name();
  options.use_cache = !no_cache;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "invalid configuration at --config: cannot open " << config_path << '\n';
      return 2;
    }
    try {
      in >> options.config;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "invalid configuration at --config: " << e.what() << '\n';
      return 2;
    }
  }
  const hdl::cli::RunOutcome outcome = hdl::cli::run(options);
  (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.message << '\n';
  for (const auto& f : outcome.files) std::cout << "  " << f << '\n';
  return outcome.exit_code;
}
