#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mde {

/// A bivariate velocity sample: paired radial (v1) and transverse (v2)
/// components, stored as parallel columns.
struct VelocityDataset {
  std::vector<double> v1;
  std::vector<double> v2;

  std::size_t size() const { return v1.size(); }
  bool empty() const { return v1.empty(); }

  void reserve(std::size_t n) {
    v1.reserve(n);
    v2.reserve(n);
  }

  void append(double a, double b) {
    v1.push_back(a);
    v2.push_back(b);
  }
};

/// Arithmetic mean; throws std::invalid_argument on empty input.
double sample_mean(const std::vector<double>& xs);

/// Unbiased (n-1) sample variance; requires at least two values.
double sample_variance(const std::vector<double>& xs);

/// Checks that the dataset has at least `min_size` rows, matched column
/// lengths, and only finite values.  Throws data_error otherwise; `label`
/// names the dataset in the message.
void require_valid(const VelocityDataset& data, std::size_t min_size,
                   const std::string& label);

}  // namespace mde
