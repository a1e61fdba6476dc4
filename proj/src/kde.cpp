#include "mde/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mde/errors.hpp"

namespace mde {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// One factor of the separable kernel: T(i, a) = exp(-(xs[a] - p[i])^2 / (2 h^2)).
Eigen::MatrixXd exp_table(const std::vector<double>& points,
                          const std::vector<double>& nodes, double h) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd table(n, m);
  const double inv = 1.0 / (2.0 * h * h);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double x = nodes[static_cast<std::size_t>(a)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = x - points[static_cast<std::size_t>(i)];
      table(i, a) = -d * d * inv;
    }
  }
  return table.array().exp().matrix();
}
}  // namespace

double bandwidth(const VelocityDataset& data) {
  if (data.size() < 2) {
    throw std::invalid_argument("bandwidth: need at least two sample points");
  }
  require_valid(data, 2, "bandwidth input");
  const double pooled = (sample_variance(data.v1) + sample_variance(data.v2)) / 2.0;
  if (!(pooled > 0.0)) {
    throw data_error("degenerate dataset: pooled sample variance is zero");
  }
  const double n = static_cast<double>(data.size());
  return std::sqrt(pooled) * std::pow(n, -1.0 / 6.0);
}

DensityEstimate::DensityEstimate(VelocityDataset points, double h)
    : points_(std::move(points)), h_(h) {
  require_valid(points_, 1, "density sample");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("DensityEstimate: bandwidth must be positive and finite");
  }
}

double DensityEstimate::operator()(double x, double y) const {
  const double inv = 1.0 / (2.0 * h_ * h_);
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double dx = x - points_.v1[i];
    const double dy = y - points_.v2[i];
    acc += std::exp(-(dx * dx + dy * dy) * inv);
  }
  return acc / (kTwoPi * static_cast<double>(points_.size()) * h_ * h_);
}

Eigen::MatrixXd DensityEstimate::evaluate_grid(
    const std::vector<double>& xs, const std::vector<double>& ys) const {
  const Eigen::MatrixXd ex = exp_table(points_.v1, xs, h_);
  const Eigen::MatrixXd ey = exp_table(points_.v2, ys, h_);
  const double norm = 1.0 / (kTwoPi * static_cast<double>(points_.size()) * h_ * h_);
  return norm * (ex.transpose() * ey);
}

std::array<double, 4> DensityEstimate::bounding_box() const {
  const auto [x_lo, x_hi] = std::minmax_element(points_.v1.begin(), points_.v1.end());
  const auto [y_lo, y_hi] = std::minmax_element(points_.v2.begin(), points_.v2.end());
  return {*x_lo, *x_hi, *y_lo, *y_hi};
}

DensityEstimate fit_kde(const VelocityDataset& data) {
  return DensityEstimate(data, bandwidth(data));
}

VelocityDataset sample_kde(const DensityEstimate& est, std::size_t m, Rng& rng) {
  const VelocityDataset& pts = est.points();
  const double h = est.bandwidth();
  VelocityDataset out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t pick = rng.uniform_index(pts.size());
    out.append(pts.v1[pick] + h * rng.normal(), pts.v2[pick] + h * rng.normal());
  }
  return out;
}

}  // namespace mde
