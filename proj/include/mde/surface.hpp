#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/divergence.hpp"
#include "mde/grid.hpp"

namespace mde {

/// A measure evaluated over every grid cell: values[i-1] compares the
/// simulated dataset of flat cell i against the observed dataset.
struct Surface {
  GridSpec grid;
  Measure measure = Measure::affinity;
  double alpha = 0.5;  // meaningful for Measure::rpe only
  std::vector<double> values;
  std::size_t observed_n = 0;
  std::vector<std::size_t> per_cell_n;
};

struct SurfaceOptions {
  std::size_t quad_resolution = 256;
  double alpha = 0.5;
  std::size_t threads = 1;
};

/// Builds the comparison surface: fits one KDE to the observed dataset and
/// one per simulated dataset, then evaluates the measure for every cell on a
/// per-pair quadrature window.  `sims` must hold exactly grid.cell_count()
/// datasets in flat-index order.  Bhattacharyya is rejected here (it can be
/// infinite; surfaces must stay finite) - use evaluate_measure for pairwise
/// values.  A degenerate dataset raises a data error naming the cell.
Surface build_surface(const VelocityDataset& observed,
                      const std::vector<VelocityDataset>& sims, Measure measure,
                      const GridSpec& grid, const SurfaceOptions& options = {});

/// Which way a measure orders "closer".
enum class Orientation { maximize, minimize };

struct Estimate {
  GridLocation location;
  double value = 0.0;
  Orientation orientation = Orientation::maximize;
};

/// Argmax over an affinity surface; ties break toward the smallest flat
/// index.  Requires measure == affinity.
Estimate argmax_affinity(const Surface& surface);

/// Argmin over a divergence surface (squared Hellinger, KL, PE, or rPE);
/// ties break toward the smallest flat index.
Estimate argmin_divergence(const Surface& surface);

/// Dispatches to argmax_affinity or argmin_divergence by the surface measure.
Estimate best_estimate(const Surface& surface);

/// One named model's affinity surface reduced to its best cell.
struct ModelRanking {
  std::string model;
  double best_value = 0.0;
  Estimate estimate;
};

/// Orders affinity surfaces for competing models by their best value,
/// descending; ties break by model name.  All surfaces must be affinity
/// surfaces and the list must be nonempty.
std::vector<ModelRanking> rank_models(
    const std::vector<std::pair<std::string, Surface>>& candidates);

}  // namespace mde
