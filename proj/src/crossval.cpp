#include "mde/crossval.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>

#include "mde/errors.hpp"
#include "mde/kde.hpp"
#include "mde/parallel.hpp"

namespace mde {

std::vector<std::pair<int, int>> block_midpoints(const GridSpec& grid) {
  validate(grid);
  if (grid.n_r % 3 != 0 || grid.n_theta % 3 != 0) {
    throw std::invalid_argument(
        "block_midpoints: grid dimensions must be divisible by 3 (got " +
        std::to_string(grid.n_r) + "x" + std::to_string(grid.n_theta) + ")");
  }
  std::vector<std::pair<int, int>> mids;
  mids.reserve(static_cast<std::size_t>(grid.n_r / 3 * grid.n_theta / 3));
  for (int k = 2; k <= grid.n_r; k += 3) {
    for (int j = 2; j <= grid.n_theta; j += 3) {
      mids.emplace_back(k, j);
    }
  }
  return mids;
}

int chebyshev_ring(std::pair<int, int> center, std::pair<int, int> point) {
  return std::max(std::abs(point.first - center.first),
                  std::abs(point.second - center.second));
}

CrossValReport run_crossval(const std::vector<VelocityDataset>& sims,
                            const GridSpec& grid, Measure measure,
                            const CrossValOptions& options) {
  const auto mids = block_midpoints(grid);  // validates the grid
  if (measure == Measure::bhattacharyya) {
    throw std::invalid_argument(
        "run_crossval: bhattacharyya can be unbounded; use affinity instead");
  }
  const auto d = static_cast<std::size_t>(grid.cell_count());
  if (sims.size() != d) {
    throw std::invalid_argument("run_crossval: expected " + std::to_string(d) +
                                " simulated datasets, got " +
                                std::to_string(sims.size()));
  }

  // Fit every cell's KDE once up front; they are shared read-only by all
  // leave-out trials.
  std::vector<std::unique_ptr<DensityEstimate>> kdes(d);
  parallel_for(d, options.threads, [&](std::size_t i) {
    try {
      kdes[i] = std::make_unique<DensityEstimate>(fit_kde(sims[i]));
    } catch (const data_error& e) {
      const auto [k, j] = indices_from_flat(static_cast<int>(i) + 1, grid);
      throw data_error("cell (" + std::to_string(k) + ", " + std::to_string(j) +
                       "): " + e.what());
    }
  });

  // All (midpoint, candidate) measure evaluations, flattened for the pool.
  const std::size_t candidates = d - 1;
  std::vector<double> values(mids.size() * candidates);
  parallel_for(values.size(), options.threads, [&](std::size_t t) {
    const std::size_t m = t / candidates;
    std::size_t i = t % candidates;
    const auto mid_flat = static_cast<std::size_t>(
        flat_index(mids[m].first, mids[m].second, grid) - 1);
    if (i >= mid_flat) ++i;  // skip the held-out midpoint
    const DensityEstimate& held = *kdes[mid_flat];
    const DensityEstimate& cand = *kdes[i];
    const QuadratureGrid quad = make_quadrature(
        held, cand, options.quad_resolution, options.quad_resolution);
    values[t] = evaluate_measure(measure, cand, held, quad, options.alpha).value;
  });

  CrossValReport report;
  report.model = options.model_name;
  report.measure = measure;
  const bool maximize = is_similarity(measure);
  for (std::size_t m = 0; m < mids.size(); ++m) {
    const auto mid_flat = static_cast<std::size_t>(
        flat_index(mids[m].first, mids[m].second, grid) - 1);
    std::size_t best_cell = 0;
    double best_value = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < candidates; ++i) {
      std::size_t cell = i < mid_flat ? i : i + 1;
      const double value = values[m * candidates + i];
      const bool better =
          first || (maximize ? value > best_value : value < best_value);
      if (better) {
        best_cell = cell;
        best_value = value;
        first = false;
      }
    }
    CrossValRecord rec;
    rec.midpoint_k = mids[m].first;
    rec.midpoint_j = mids[m].second;
    const auto [bk, bj] = indices_from_flat(static_cast<int>(best_cell) + 1, grid);
    rec.best_k = bk;
    rec.best_j = bj;
    rec.best_value = best_value;
    rec.ring = chebyshev_ring({rec.midpoint_k, rec.midpoint_j}, {bk, bj});
    if (rec.ring == 1) {
      ++report.ring1_hits;
    } else if (rec.ring == 2) {
      ++report.ring2_hits;
    } else {
      ++report.beyond;
    }
    report.records.push_back(rec);
  }
  return report;
}

}  // namespace mde
