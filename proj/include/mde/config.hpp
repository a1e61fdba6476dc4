#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mde/grid.hpp"

namespace mde {

/// Run-wide configuration: the grid plus the numeric knobs every subcommand
/// shares.  Defaults reproduce the standard setup (24x9 grid from r = 1.7,
/// 256^2 quadrature, 300 bootstrap replicates at level 0.95, alpha 0.5).
struct RunConfig {
  GridSpec grid;
  std::size_t quad_resolution = 256;
  std::size_t bootstrap_replicates = 300;
  double confidence_level = 0.95;
  double alpha = 0.5;
  std::uint64_t seed = 1729;
  std::size_t threads = 1;
};

RunConfig default_config();

/// Checks ranges (resolution >= 16, replicates >= 2, level in (0,1),
/// alpha in [0,1), threads >= 1) and the grid; throws std::invalid_argument.
void validate(const RunConfig& config);

/// Parses a flat "key = value" config file ('#' comments, blank lines ok).
/// Keys: grid.r0, grid.theta0, grid.delta_r, grid.delta_theta, grid.n_r,
/// grid.n_theta, quad_resolution, bootstrap_replicates, confidence_level,
/// alpha, seed, threads.  Unknown keys or unparseable values are
/// configuration errors (std::invalid_argument).
RunConfig parse_config_file(const std::filesystem::path& path);

/// Stable canonical rendering (sorted keys, round-trip precision); equal
/// configs produce identical text.
std::string canonical_config_text(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.  Written into
/// run metadata so outputs can be traced back to their exact configuration.
std::string config_hash(const RunConfig& config);

}  // namespace mde
