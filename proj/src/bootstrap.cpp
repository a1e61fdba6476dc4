#include "mde/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mde/divergence.hpp"
#include "mde/errors.hpp"
#include "mde/kde.hpp"
#include "mde/parallel.hpp"

namespace mde {

std::size_t cutoff_rank(double level, std::size_t replicates) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
  }
  if (replicates < 2) {
    throw std::invalid_argument("bootstrap: need at least two replicates");
  }
  // The small slack keeps ceil from overshooting when (1-level)*B is an
  // integer that floating point carries a hair above itself
  // (e.g. 0.05 * 300).
  const double target = (1.0 - level) * static_cast<double>(replicates);
  auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  rank = std::max<std::size_t>(rank, 1);
  return std::min(rank, replicates);
}

ConfidenceSet bootstrap_confidence_set(const VelocityDataset& observed,
                                       const VelocityDataset& sim_at_argmax,
                                       const Surface& surface, std::size_t B,
                                       double level, const Rng& rng,
                                       const BootstrapOptions& options) {
  const std::size_t rank = cutoff_rank(level, B);  // validates B and level
  if (surface.measure != Measure::affinity) {
    throw std::invalid_argument(
        "bootstrap_confidence_set: surface measure must be affinity");
  }
  const Estimate argmax = argmax_affinity(surface);

  const DensityEstimate observed_kde = fit_kde(observed);
  const DensityEstimate argmax_kde = fit_kde(sim_at_argmax);
  const std::size_t n = sim_at_argmax.size();

  ConfidenceSet out;
  out.level = level;
  out.replicate_affinities.assign(B, 0.0);

  parallel_for(B, options.threads, [&](std::size_t b) {
    Rng replicate_rng = rng.substream(static_cast<std::uint64_t>(b));
    VelocityDataset draw = sample_kde(argmax_kde, n, replicate_rng);
    const DensityEstimate replicate_kde =
        options.refit_bandwidth
            ? fit_kde(draw)
            : DensityEstimate(std::move(draw), argmax_kde.bandwidth());
    const QuadratureGrid quad =
        make_quadrature(observed_kde, replicate_kde, options.quad_resolution,
                        options.quad_resolution);
    out.replicate_affinities[b] =
        hellinger_affinity(replicate_kde, observed_kde, quad);
  });

  std::vector<double> sorted = out.replicate_affinities;
  std::sort(sorted.begin(), sorted.end());
  // Guard against the degenerate case where even the weakest replicates
  // exceed the surface maximum: the set must never exclude the argmax.
  out.cutoff = std::min(sorted[rank - 1], argmax.value);

  for (int i = 1; i <= surface.grid.cell_count(); ++i) {
    const double value = surface.values[static_cast<std::size_t>(i - 1)];
    if (value >= out.cutoff) {
      const GridLocation loc = location_from_flat(i, surface.grid);
      out.members.push_back({loc.k, loc.j, loc.r, loc.theta, value});
    }
  }
  return out;
}

}  // namespace mde
