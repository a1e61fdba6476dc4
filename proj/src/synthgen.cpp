#include "mde/synthgen.hpp"

#include <cmath>
#include <stdexcept>

namespace mde {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate(const FieldParams& params) {
  if (!(params.noise_scale > 0.0)) {
    throw std::invalid_argument("field: noise_scale must be positive");
  }
  if (params.mode_count < 1) {
    throw std::invalid_argument("field: mode_count must be at least 1");
  }
  if (!(params.mode_spread >= 0.0)) {
    throw std::invalid_argument("field: mode_spread must be nonnegative");
  }
  if (!std::isfinite(params.amplitude) || !std::isfinite(params.radial_gain) ||
      !std::isfinite(params.angular_gain)) {
    throw std::invalid_argument("field: amplitude and gains must be finite");
  }
}

std::pair<double, double> mean_velocity(const GridLocation& loc,
                                        const FieldParams& params) {
  const double angle = params.angular_gain * loc.theta * kPi / 180.0;
  return {params.amplitude * loc.r * std::cos(angle),
          params.amplitude * params.radial_gain * loc.r * std::sin(angle)};
}

VelocityDataset generate_velocity_dataset(const GridLocation& loc, std::size_t n,
                                          const FieldParams& params, Rng& rng) {
  validate(params);
  if (n < 2) {
    throw std::invalid_argument("generate_velocity_dataset: n must be at least 2");
  }
  const auto [mx, my] = mean_velocity(loc, params);
  VelocityDataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ox = 0.0, oy = 0.0;
    if (params.mode_count > 1) {
      const double arm = 2.0 * kPi *
                         static_cast<double>(rng.uniform_index(
                             static_cast<std::size_t>(params.mode_count))) /
                         static_cast<double>(params.mode_count);
      ox = params.mode_spread * std::cos(arm);
      oy = params.mode_spread * std::sin(arm);
    }
    out.append(mx + ox + params.noise_scale * rng.normal(),
               my + oy + params.noise_scale * rng.normal());
  }
  return out;
}

std::vector<VelocityDataset> generate_suite(const GridSpec& grid,
                                            std::size_t n_per_cell,
                                            const FieldParams& params,
                                            std::uint64_t master_seed) {
  validate(grid);
  validate(params);
  const Rng master(master_seed);
  std::vector<VelocityDataset> suite;
  suite.reserve(static_cast<std::size_t>(grid.cell_count()));
  for (int i = 1; i <= grid.cell_count(); ++i) {
    Rng cell_rng = master.substream(static_cast<std::uint64_t>(i));
    suite.push_back(generate_velocity_dataset(location_from_flat(i, grid),
                                              n_per_cell, params, cell_rng));
  }
  return suite;
}

}  // namespace mde
