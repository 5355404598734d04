#pragma once

// Batch front end: a run is fully described by a RunConfig, which serializes
// to JSON and back.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace k3dyn::cli {

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  /// Table or report destination; empty writes the artifact to stdout.
  std::string output;
  std::string surface_file;
  /// Seed of the random surface; defaults to `seed`.
  std::optional<std::uint64_t> surface_seed;
  long long bound = 5;
  /// Subcommand parameters with defaults filled.
  nlohmann::json params = nlohmann::json::object();
};

const std::vector<std::string>& subcommands();

/// Default parameter object of a subcommand.
nlohmann::json default_params(const std::string& subcommand);

/// Validates, fills defaults and rejects unknown keys. Throws ErrorKind::config.
RunConfig parse_config(const nlohmann::json& j);
/// Same from JSON text; syntax errors report line and column.
RunConfig parse_config_text(const std::string& text);

nlohmann::json serialize(const RunConfig& cfg);

/// Dispatches the run: summary lines go to `out`, the artifact to cfg.output
/// (or to `out` when empty). Returns 0 or the exit code of the first error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace k3dyn::cli
