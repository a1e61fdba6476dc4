#pragma once

// Shared fixtures for the test suites: deterministic Gaussian samples and a
// few small-grid builders.

#include <cstdint>

#include "mde/dataset.hpp"
#include "mde/grid.hpp"
#include "mde/rng.hpp"

namespace testutil {

/// n points from N((mx, my), diag(sx^2, sy^2)).
inline mde::VelocityDataset gaussian_sample(std::size_t n, double mx, double my,
                                            double sx, double sy,
                                            std::uint64_t seed) {
  mde::Rng rng(seed);
  mde::VelocityDataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.append(mx + sx * rng.normal(), my + sy * rng.normal());
  }
  return out;
}

inline mde::VelocityDataset standard_sample(std::size_t n, std::uint64_t seed) {
  return gaussian_sample(n, 0.0, 0.0, 1.0, 1.0, seed);
}

inline mde::GridSpec tiny_grid(int n_r = 3, int n_theta = 3) {
  mde::GridSpec grid;
  grid.n_r = n_r;
  grid.n_theta = n_theta;
  return grid;
}

}  // namespace testutil
