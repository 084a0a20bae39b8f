// Command-line entry point: batch experiments and the instrument service.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "obsim/experiment.hpp"
#include "obsim/service.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Observer / black-box simulator"};
  app.require_subcommand(1);

  auto *run = app.add_subcommand("run", "Run one experiment and emit its report");
  std::string kind;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  run->add_option("kind", kind,
                  "session | derive-h | born | surprise | substitution | reversal | "
                  "doubleslit-pattern | doubleslit-sample")
      ->required();
  run->add_option("--config", config_path, "JSON configuration file");
  run->add_option("--seed", seed, "Seed overriding the configuration");
  run->add_option("--out", out, "Report path; artifacts are written beside it");

  auto *serve = app.add_subcommand("serve", "Serve instrument sessions over HTTP");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : obsim::exit_code::usage;
  }

  if (*serve) {
    return obsim::serve(host, port);
  }

  obsim::ExperimentConfig config;
  try {
    config.kind = obsim::parse_kind(kind);
    if (!config_path.empty()) {
      config.params = obsim::Json::parse(obsim::read_file(config_path));
      // A report file can be re-run directly from its embedded config.
      if (config.params.is_object() && config.params.contains("config") &&
          config.params.contains("kind") && config.params.at("config").is_object()) {
        config.params = obsim::Json(config.params.at("config"));
      }
    }
  } catch (const obsim::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return obsim::exit_code::usage;
  } catch (const obsim::IoError &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return obsim::exit_code::io;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return obsim::exit_code::config;
  }
  config.seed = seed;
  config.out = out;
  return obsim::run(config, std::cout, std::cerr);
}
