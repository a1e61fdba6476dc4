#include "mde/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mde {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_index(int value, int limit, const char* name) {
  if (value < 1 || value > limit) {
    throw std::out_of_range(std::string("grid index ") + name + "=" +
                            std::to_string(value) + " outside [1, " +
                            std::to_string(limit) + "]");
  }
}
}  // namespace

void validate(const GridSpec& spec) {
  if (!(spec.delta_r > 0.0)) {
    throw std::invalid_argument("grid: delta_r must be positive");
  }
  if (!(spec.delta_theta > 0.0)) {
    throw std::invalid_argument("grid: delta_theta must be positive");
  }
  if (spec.n_r < 1) throw std::invalid_argument("grid: n_r must be at least 1");
  if (spec.n_theta < 1) {
    throw std::invalid_argument("grid: n_theta must be at least 1");
  }
}

GridLocation grid_location(int k, int j, const GridSpec& spec) {
  validate(spec);
  check_index(k, spec.n_r, "k");
  check_index(j, spec.n_theta, "j");
  GridLocation loc;
  loc.k = k;
  loc.j = j;
  loc.r = spec.r0 + (k - 1) * spec.delta_r + spec.delta_r / 2.0;
  loc.theta = spec.theta0 + (j - 1) * spec.delta_theta + spec.delta_theta / 2.0;
  return loc;
}

std::pair<double, double> to_cartesian(const GridLocation& loc) {
  const double rad = loc.theta * kPi / 180.0;
  return {loc.r * std::cos(rad), loc.r * std::sin(rad)};
}

int flat_index(int k, int j, const GridSpec& spec) {
  validate(spec);
  check_index(k, spec.n_r, "k");
  check_index(j, spec.n_theta, "j");
  return spec.n_theta * (k - 1) + j;
}

std::pair<int, int> indices_from_flat(int i, const GridSpec& spec) {
  validate(spec);
  check_index(i, spec.cell_count(), "flat");
  const int k = (i - 1) / spec.n_theta + 1;
  const int j = (i - 1) % spec.n_theta + 1;
  return {k, j};
}

GridLocation location_from_flat(int i, const GridSpec& spec) {
  const auto [k, j] = indices_from_flat(i, spec);
  return grid_location(k, j, spec);
}

}  // namespace mde
