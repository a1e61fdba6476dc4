#pragma once

#include <cstddef>
#include <vector>

#include "mde/dataset.hpp"
#include "mde/rng.hpp"

namespace mde {

/// A fitted relative density ratio f / h_alpha, h_alpha = alpha f +
/// (1 - alpha) g, as a Gaussian kernel expansion over a subset of the
/// numerator sample.  Immutable once fitted and safe to share across threads.
struct RatioModel {
  VelocityDataset centers;
  std::vector<double> weights;
  double kernel_width = 0.0;
  double alpha = 0.0;
  double ridge = 0.0;

  /// Modeled ratio value at a point.
  double operator()(double x, double y) const;
};

/// Default hyperparameter candidates: kernel widths as multiples
/// {0.25, 0.5, 1, 2, 4} of the pooled sample's median pairwise distance, and
/// ridge penalties {1e-3, 1e-2, 1e-1, 1}.
std::vector<double> default_width_multipliers();
std::vector<double> default_ridge_candidates();

/// Least-squares fit of the relative density ratio from samples alone (no
/// density estimation).  Basis centers are b points drawn uniformly without
/// replacement from `numer`; the coefficient vector solves the regularized
/// normal equations
///   (alpha/n_f) Phi_f' Phi_f + ((1-alpha)/n_g) Phi_g' Phi_g + ridge I,
/// right-hand side mean of Phi_f rows.  Width and ridge are selected by
/// 5-fold cross-validation of the out-of-fold squared-loss objective.
/// Width multipliers scale the pooled median pairwise distance.
///
/// Preconditions: both datasets nonempty, b >= 1, 0 <= alpha < 1, candidate
/// lists nonempty (parameter error otherwise).  A linear system that stays
/// singular after the ridge is a numerical error.
RatioModel fit_relative_ratio(const VelocityDataset& numer,
                              const VelocityDataset& denom, double alpha,
                              std::size_t b, const std::vector<double>& width_multipliers,
                              const std::vector<double>& ridge_candidates,
                              Rng& rng);

/// Convenience overload with b = min(100, numer size) and default grids.
RatioModel fit_relative_ratio(const VelocityDataset& numer,
                              const VelocityDataset& denom, double alpha,
                              Rng& rng);

/// Sample-based relative Pearson divergence from a fitted ratio model, per
/// the squared-loss expansion of PE(h_alpha, f) = E_h[w^2] - 1:
///   -alpha mean_f[w^2] - (1-alpha) mean_g[w^2] + 2 mean_f[w] - 1.
/// Negative estimates are reported as-is; the estimator is unconstrained.
double direct_rpe(const RatioModel& model, const VelocityDataset& numer,
                  const VelocityDataset& denom);

}  // namespace mde
