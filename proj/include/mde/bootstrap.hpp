#pragma once

#include <cstddef>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/rng.hpp"
#include "mde/surface.hpp"

namespace mde {

/// A grid cell retained in the confidence set, with its surface affinity.
struct ConfidenceMember {
  int k = 0;
  int j = 0;
  double r = 0.0;
  double theta = 0.0;
  double affinity = 0.0;
};

/// Smoothed-bootstrap confidence set for the location estimate.
struct ConfidenceSet {
  double level = 0.0;
  double cutoff = 0.0;
  std::vector<ConfidenceMember> members;       // flat-index order
  std::vector<double> replicate_affinities;    // replicate order, size B
};

struct BootstrapOptions {
  std::size_t quad_resolution = 256;
  std::size_t threads = 1;
  /// Recompute the bandwidth on every replicate (default); when false the
  /// replicate reuses the argmax model's bandwidth.
  bool refit_bandwidth = true;
};

/// 1-based nearest-rank index: the smallest integer at or above
/// (1 - level) * replicates, clamped to [1, replicates].  With B = 300 and
/// level 0.95 this is rank 15.
std::size_t cutoff_rank(double level, std::size_t replicates);

/// Smoothed bootstrap under the argmax model: each replicate resamples
/// `sim_at_argmax`'s KDE with kernel noise (sample_kde), refits a KDE, and
/// records its Hellinger affinity to the observed dataset's KDE.  The cutoff
/// is the nearest-rank (1 - level) quantile of the B replicate affinities
/// (never above the surface maximum), and the confidence set keeps every
/// cell whose surface affinity is at or above the cutoff - so the argmax
/// cell is always a member.
///
/// `surface` must be the affinity surface the argmax came from; B >= 2 and
/// 0 < level < 1.  Replicate b draws from rng.substream(b), making the run
/// deterministic for a given seed regardless of thread count.
ConfidenceSet bootstrap_confidence_set(const VelocityDataset& observed,
                                       const VelocityDataset& sim_at_argmax,
                                       const Surface& surface, std::size_t B,
                                       double level, const Rng& rng,
                                       const BootstrapOptions& options = {});

}  // namespace mde
