#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mde/bootstrap.hpp"
#include "mde/crossval.hpp"
#include "mde/dataset.hpp"
#include "mde/grid.hpp"
#include "mde/surface.hpp"

namespace mde {

/// Reads a two-column velocity file: one "v1 v2" pair per line, separated by
/// whitespace and/or a comma.  Blank lines and lines whose first non-blank
/// character is '#' are skipped.  Malformed lines raise a data error naming
/// the 1-based line number; fewer than two data rows is a degenerate-input
/// data error.
VelocityDataset parse_velocity_file(const std::filesystem::path& path);

/// Writes a velocity file in the format parse_velocity_file reads, with full
/// round-trip precision.  `comment`, when nonempty, becomes a '#' header.
void write_velocity_file(const std::filesystem::path& path,
                         const VelocityDataset& data,
                         const std::string& comment = "");

/// One grid cell's dataset location within a manifest.  `path` is kept as
/// written in the manifest file; relative paths resolve against `root`.
struct ManifestEntry {
  int k = 0;
  int j = 0;
  std::filesystem::path path;
};

/// A simulation-suite manifest: the grid, the observed dataset, and one file
/// per grid cell.
struct Manifest {
  GridSpec grid;
  std::string model;
  std::filesystem::path observed_path;
  std::vector<ManifestEntry> entries;
  std::filesystem::path root;  // directory the manifest was loaded from

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : root / p;
  }
};

/// Requires a valid grid and exactly one entry per grid cell (no duplicates,
/// none missing) and a nonempty observed path; data error otherwise.
void validate_manifest(const Manifest& manifest);

/// Loads and validates a manifest JSON file.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes a manifest JSON file (paths stored as given).
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Parses every cell dataset named by the manifest, flat-index order.
/// Failures are reported per cell with the offending path.
std::vector<VelocityDataset> load_suite(const Manifest& manifest);

// --- artifact serialization -------------------------------------------------

void write_surface_json(const std::filesystem::path& path, const Surface& surface);
Surface read_surface_json(const std::filesystem::path& path);

/// Three-column text table (r, theta, value), one grid cell per row in flat
/// order, for plotting.
void write_surface_table(const std::filesystem::path& path, const Surface& surface);

void write_estimate_json(const std::filesystem::path& path, const Surface& surface,
                         const Estimate& estimate);

void write_confidence_set_json(const std::filesystem::path& path,
                               const ConfidenceSet& set);

void write_crossval_json(const std::filesystem::path& path,
                         const CrossValReport& report);

/// Human-readable cross-validation summary table.
void write_crossval_table(const std::filesystem::path& path,
                          const CrossValReport& report);

}  // namespace mde
