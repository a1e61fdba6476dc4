#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/divergence.hpp"
#include "mde/grid.hpp"

namespace mde {

/// Midpoints of the 3x3 blocks tiling the grid, flat-index order.  Requires
/// both grid dimensions divisible by 3; the default 24x9 grid yields 24
/// blocks with midpoints (2, 2), (2, 5), ..., (23, 8).
std::vector<std::pair<int, int>> block_midpoints(const GridSpec& grid);

/// Chebyshev ring of `point` around `center`: max(|dk|, |dj|) in index
/// units.  Ring 0 is the center itself, ring 1 its 8 immediate neighbours.
int chebyshev_ring(std::pair<int, int> center, std::pair<int, int> point);

/// One leave-out trial: the block midpoint plays the observed dataset and
/// the best remaining cell is recorded with its ring distance.
struct CrossValRecord {
  int midpoint_k = 0, midpoint_j = 0;
  int best_k = 0, best_j = 0;
  double best_value = 0.0;
  int ring = 0;
};

struct CrossValReport {
  std::string model;
  Measure measure = Measure::affinity;
  std::vector<CrossValRecord> records;  // one per block, flat-midpoint order
  std::size_t ring1_hits = 0;           // best cell in ring 1
  std::size_t ring2_hits = 0;           // best cell in ring 2
  std::size_t beyond = 0;               // best cell farther out
};

struct CrossValOptions {
  std::size_t quad_resolution = 256;
  std::size_t threads = 1;
  double alpha = 0.5;
  std::string model_name;
};

/// Block cross-validation of a simulation suite: every block midpoint is
/// held out as pseudo-observed data and compared against all other cells;
/// the measure's best cell is binned by Chebyshev ring (the midpoint itself
/// is excluded, so ring 0 cannot occur and ring 1 is a perfect hit).  Ties
/// break toward the smallest flat index.  `sims` holds one dataset per cell
/// in flat order.
CrossValReport run_crossval(const std::vector<VelocityDataset>& sims,
                            const GridSpec& grid, Measure measure,
                            const CrossValOptions& options = {});

}  // namespace mde
