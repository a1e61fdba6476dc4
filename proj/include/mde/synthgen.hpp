#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/grid.hpp"
#include "mde/rng.hpp"

namespace mde {

/// Parameters of the synthetic velocity field.  The mean velocity at a grid
/// cell is a smooth injective function of the cell's polar coordinates, so
/// neighbouring cells produce nearby - but distinct - sampling
/// distributions, and distributional distance grows with grid distance:
///   mean = amplitude * (r cos(angular_gain * theta_rad),
///          radial_gain * r sin(angular_gain * theta_rad)).
/// Samples add isotropic Gaussian noise (scale `noise_scale`) and, when
/// mode_count > 1, a uniformly chosen mode offset of magnitude `mode_spread`
/// to make the distribution multimodal.
struct FieldParams {
  double amplitude = 20.0;
  double radial_gain = 1.0;
  double angular_gain = 0.07;
  double noise_scale = 1.0;
  int mode_count = 1;
  double mode_spread = 0.0;
};

/// Throws std::invalid_argument unless noise_scale > 0, mode_count >= 1,
/// mode_spread >= 0, and the gains/amplitude are finite.
void validate(const FieldParams& params);

/// Mean velocity of the field at a grid location (exposed for tests).
std::pair<double, double> mean_velocity(const GridLocation& loc,
                                        const FieldParams& params);

/// Draws n velocity pairs for the cell at `loc`.  Requires n >= 2 so the
/// result is always usable for bandwidth selection.
VelocityDataset generate_velocity_dataset(const GridLocation& loc, std::size_t n,
                                          const FieldParams& params, Rng& rng);

/// One dataset per grid cell, flat-index order.  Cell i draws from
/// Rng(master_seed).substream(i), so any cell's data is reproducible in
/// isolation and the suite is identical however the loop is scheduled.
std::vector<VelocityDataset> generate_suite(const GridSpec& grid,
                                            std::size_t n_per_cell,
                                            const FieldParams& params,
                                            std::uint64_t master_seed);

}  // namespace mde
