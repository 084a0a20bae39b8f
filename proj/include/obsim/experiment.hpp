#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "obsim/serialization.hpp"

namespace obsim {

enum class ExperimentKind {
  session,
  derive_h,
  born,
  surprise,
  substitution,
  reversal,
  doubleslit_pattern,
  doubleslit_sample,
};

ExperimentKind parse_kind(const std::string &name); // ConfigError on unknown names
const char *to_string(ExperimentKind kind) noexcept;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::session;
  Json params = Json::object();           // kind-specific parameters
  std::optional<std::uint64_t> seed;      // overrides any seed in params
  std::optional<std::string> out;         // report path; artifacts sit beside it
};

struct Artifact {
  std::string suffix; // appended to the report stem, e.g. ".stream.jsonl"
  std::string contents;
};

struct ExperimentResult {
  Json report;                 // always embeds the resolved "config"
  std::vector<Artifact> artifacts;
};

/// Resolves defaults and seeds and runs the experiment. Throws ConfigError,
/// ContractViolation, DomainError or IoError.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Runs and writes the report (to `out`, or `stdout` when unset) and any
/// artifacts. Returns the process exit status; diagnostics go to `stderr`.
int run(const ExperimentConfig &config, std::ostream &stdout_stream, std::ostream &stderr_stream);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int config = 3;
inline constexpr int contract = 4;
inline constexpr int domain = 5;
inline constexpr int io = 6;
inline constexpr int bind = 7;
} // namespace exit_code

/// Report path with its ".json" extension removed, used to name artifacts.
std::string artifact_stem(const std::string &report_path);

/// Reads a whole file; IoError on failure.
std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

} // namespace obsim
