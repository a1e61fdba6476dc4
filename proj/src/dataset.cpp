#include "mde/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "mde/errors.hpp"

namespace mde {

double sample_mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty input");
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) {
    throw std::invalid_argument("sample_variance: need at least two values");
  }
  const double mean = sample_mean(xs);
  double acc = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(xs.size() - 1);
}

void require_valid(const VelocityDataset& data, std::size_t min_size,
                   const std::string& label) {
  if (data.v1.size() != data.v2.size()) {
    throw data_error(label + ": component columns have different lengths (" +
                     std::to_string(data.v1.size()) + " vs " +
                     std::to_string(data.v2.size()) + ")");
  }
  if (data.size() < min_size) {
    throw data_error(label + ": has " + std::to_string(data.size()) +
                     " rows, need at least " + std::to_string(min_size));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data.v1[i]) || !std::isfinite(data.v2[i])) {
      throw data_error(label + ": non-finite value at row " +
                       std::to_string(i + 1));
    }
  }
}

}  // namespace mde
