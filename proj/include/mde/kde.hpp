#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/rng.hpp"

namespace mde {

/// Normal-reference bandwidth for a bivariate sample:
///   h = sigma * n^(-1/6),  sigma^2 = (s_v1^2 + s_v2^2) / 2,
/// with unbiased (n-1) component variances.  Throws std::invalid_argument for
/// n < 2 and data_error when the pooled variance is zero (degenerate data).
double bandwidth(const VelocityDataset& data);

/// Bivariate Gaussian kernel density estimate with a single isotropic
/// bandwidth h:
///   f(x, y) = 1/(2 pi n h^2) * sum_i exp(-((x-X_i)^2 + (y-Y_i)^2)/(2 h^2)).
class DensityEstimate {
 public:
  /// Takes ownership of the sample points; h must be positive and finite,
  /// the dataset non-empty with matched finite columns.
  DensityEstimate(VelocityDataset points, double h);

  double bandwidth() const { return h_; }
  const VelocityDataset& points() const { return points_; }
  std::size_t sample_size() const { return points_.size(); }

  /// Density at a single point (plain kernel sum).
  double operator()(double x, double y) const;

  /// Densities on the tensor grid nodes {xs} x {ys}; entry (a, b) is the
  /// density at (xs[a], ys[b]).  The Gaussian kernel factorizes, so the
  /// whole grid reduces to two 1-D exponential tables and one matrix
  /// product - this is what makes surface and cross-validation runs cheap.
  Eigen::MatrixXd evaluate_grid(const std::vector<double>& xs,
                                const std::vector<double>& ys) const;

  /// Data bounding box {x_lo, x_hi, y_lo, y_hi}.
  std::array<double, 4> bounding_box() const;

 private:
  VelocityDataset points_;
  double h_;
};

/// Fits a KDE with the normal-reference bandwidth above.
DensityEstimate fit_kde(const VelocityDataset& data);

/// Draws m points from the estimate: pick a sample point uniformly, then add
/// isotropic Gaussian noise with standard deviation h (the smoothed
/// bootstrap's resampling kernel).
VelocityDataset sample_kde(const DensityEstimate& est, std::size_t m, Rng& rng);

}  // namespace mde
