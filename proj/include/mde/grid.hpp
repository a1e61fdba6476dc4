#pragma once

#include <utility>

namespace mde {

/// Polar search grid: n_r radial bins of width delta_r starting at r0 and
/// n_theta angular bins of width delta_theta starting at theta0.  Angles are
/// in degrees throughout; they are converted to radians only inside
/// trigonometric calls.
struct GridSpec {
  double r0 = 1.7;
  double theta0 = 0.0;
  double delta_r = 0.025;
  double delta_theta = 10.0;
  int n_r = 24;
  int n_theta = 9;

  int cell_count() const { return n_r * n_theta; }
};

/// Throws std::invalid_argument unless bin widths are positive and both bin
/// counts are at least 1.
void validate(const GridSpec& spec);

/// A grid cell: 1-based bin indices (k radial, j angular) and the polar
/// coordinates of the bin center.
struct GridLocation {
  int k = 0;
  int j = 0;
  double r = 0.0;
  double theta = 0.0;  // degrees
};

/// Center of bin (k, j):
///   r     = r0 + (k-1) * delta_r + delta_r / 2
///   theta = theta0 + (j-1) * delta_theta + delta_theta / 2
/// Throws std::out_of_range naming the offending index if k is outside
/// [1, n_r] or j outside [1, n_theta].
GridLocation grid_location(int k, int j, const GridSpec& spec);

/// (x, y) = (r cos theta, r sin theta), theta converted to radians.
std::pair<double, double> to_cartesian(const GridLocation& loc);

/// Row-major flat cell index i = n_theta * (k-1) + j, 1-based, so
/// i ranges over [1, n_r * n_theta].
int flat_index(int k, int j, const GridSpec& spec);

/// Inverse of flat_index; returns (k, j).
std::pair<int, int> indices_from_flat(int i, const GridSpec& spec);

/// Convenience: grid_location applied to indices_from_flat(i).
GridLocation location_from_flat(int i, const GridSpec& spec);

}  // namespace mde
