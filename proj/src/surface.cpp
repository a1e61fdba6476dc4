#include "mde/surface.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "mde/errors.hpp"
#include "mde/kde.hpp"
#include "mde/parallel.hpp"

namespace mde {

namespace {
std::string cell_label(int flat, const GridSpec& grid) {
  const auto [k, j] = indices_from_flat(flat, grid);
  return "cell (" + std::to_string(k) + ", " + std::to_string(j) + ")";
}
}  // namespace

Surface build_surface(const VelocityDataset& observed,
                      const std::vector<VelocityDataset>& sims, Measure measure,
                      const GridSpec& grid, const SurfaceOptions& options) {
  validate(grid);
  if (measure == Measure::bhattacharyya) {
    throw std::invalid_argument(
        "build_surface: bhattacharyya can be unbounded; build an affinity "
        "surface and transform instead");
  }
  const auto d = static_cast<std::size_t>(grid.cell_count());
  if (sims.size() != d) {
    throw std::invalid_argument("build_surface: expected " + std::to_string(d) +
                                " simulated datasets, got " +
                                std::to_string(sims.size()));
  }

  std::unique_ptr<DensityEstimate> observed_kde;
  try {
    observed_kde = std::make_unique<DensityEstimate>(fit_kde(observed));
  } catch (const data_error& e) {
    throw data_error(std::string("observed dataset: ") + e.what());
  }

  Surface surface;
  surface.grid = grid;
  surface.measure = measure;
  surface.alpha = options.alpha;
  surface.values.assign(d, 0.0);
  surface.observed_n = observed.size();
  surface.per_cell_n.resize(d);
  for (std::size_t i = 0; i < d; ++i) surface.per_cell_n[i] = sims[i].size();

  // One KDE fit plus one quadrature evaluation per cell, each writing only
  // its own slot, so the loop parallelizes trivially.
  parallel_for(d, options.threads, [&](std::size_t i) {
    try {
      const DensityEstimate sim_kde = fit_kde(sims[i]);
      const QuadratureGrid quad =
          make_quadrature(*observed_kde, sim_kde, options.quad_resolution,
                          options.quad_resolution);
      surface.values[i] = evaluate_measure(measure, sim_kde, *observed_kde,
                                           quad, options.alpha)
                              .value;
    } catch (const data_error& e) {
      throw data_error(cell_label(static_cast<int>(i) + 1, grid) + ": " + e.what());
    }
  });
  return surface;
}

namespace {
Estimate extremum(const Surface& surface, Orientation orientation) {
  validate(surface.grid);
  const auto d = static_cast<std::size_t>(surface.grid.cell_count());
  if (surface.values.size() != d) {
    throw std::invalid_argument("surface: value count does not match its grid");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < d; ++i) {
    const bool better = orientation == Orientation::maximize
                            ? surface.values[i] > surface.values[best]
                            : surface.values[i] < surface.values[best];
    if (better) best = i;  // strict comparison: ties keep the smallest flat index
  }
  Estimate est;
  est.location = location_from_flat(static_cast<int>(best) + 1, surface.grid);
  est.value = surface.values[best];
  est.orientation = orientation;
  return est;
}
}  // namespace

Estimate argmax_affinity(const Surface& surface) {
  if (surface.measure != Measure::affinity) {
    throw std::invalid_argument("argmax_affinity: surface measure must be affinity");
  }
  return extremum(surface, Orientation::maximize);
}

Estimate argmin_divergence(const Surface& surface) {
  switch (surface.measure) {
    case Measure::squared_hellinger:
    case Measure::kl:
    case Measure::pe:
    case Measure::rpe:
      return extremum(surface, Orientation::minimize);
    default:
      throw std::invalid_argument(
          "argmin_divergence: surface measure must be a divergence "
          "(hellinger, kl, pe, or rpe)");
  }
}

Estimate best_estimate(const Surface& surface) {
  return is_similarity(surface.measure) ? argmax_affinity(surface)
                                        : argmin_divergence(surface);
}

std::vector<ModelRanking> rank_models(
    const std::vector<std::pair<std::string, Surface>>& candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("rank_models: no candidate surfaces");
  }
  std::vector<ModelRanking> out;
  out.reserve(candidates.size());
  for (const auto& [name, surface] : candidates) {
    ModelRanking r;
    r.model = name;
    r.estimate = argmax_affinity(surface);
    r.best_value = r.estimate.value;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ModelRanking& a, const ModelRanking& b) {
                     if (a.best_value != b.best_value) {
                       return a.best_value > b.best_value;
                     }
                     return a.model < b.model;
                   });
  return out;
}

}  // namespace mde
