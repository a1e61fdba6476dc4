#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "mde/kde.hpp"

namespace mde {

/// The comparison measures the library evaluates between two density
/// estimates.  `affinity` is a similarity (larger = closer); the rest are
/// divergences (smaller = closer).
enum class Measure {
  affinity,            // rho(g, f) = integral sqrt(g f)
  squared_hellinger,   // HD = 2 (1 - rho)
  bhattacharyya,       // B = -ln rho
  kl,                  // delta(g, f) = integral g ln(g / f)
  pe,                  // PE(g, f) = integral g (f/g - 1)^2
  rpe,                 // rPE = PE(h_alpha, f), h_alpha = alpha f + (1-alpha) g
};

/// True for measures where larger values mean closer distributions.
bool is_similarity(Measure m);

std::string to_string(Measure m);
Measure measure_from_string(const std::string& name);

/// A measure evaluation; `alpha` is meaningful only for Measure::rpe.
struct DivergenceValue {
  Measure measure = Measure::affinity;
  double value = 0.0;
  double alpha = 0.0;
};

/// Midpoint-rule quadrature grid: nx * ny cells covering
/// [x_lo, x_hi] x [y_lo, y_hi]; nodes are cell centers.
struct QuadratureGrid {
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
  std::size_t nx = 0, ny = 0;

  double cell_area() const;
  std::vector<double> x_nodes() const;
  std::vector<double> y_nodes() const;
};

/// Quadrature window for a pair of estimates: the union of the two data
/// bounding boxes, padded on every side by 5 * max(h_f, h_g), so that the
/// Gaussian tails the kernels add beyond the data are captured.  Requires
/// nx, ny >= 16.
QuadratureGrid make_quadrature(const DensityEstimate& f,
                               const DensityEstimate& g,
                               std::size_t nx = 256, std::size_t ny = 256);

/// Contributions whose denominator falls below this floor are skipped, and
/// numerator densities are floored here before logs and ratios, so far tails
/// cannot emit NaN or infinity.
inline constexpr double kDensityFloor = 1e-300;

/// Hellinger affinity rho(g, f), clamped to [0, 1].
double hellinger_affinity(const DensityEstimate& g, const DensityEstimate& f,
                          const QuadratureGrid& quad);

/// Maps an affinity to {squared Hellinger distance 2(1-rho),
/// Bhattacharyya distance -ln rho}.  rho may exceed [0, 1] only by a small
/// quadrature tolerance (it is clamped); beyond that it is a parameter error.
std::pair<double, double> affinity_to_distances(double rho);

/// Kullback-Leibler divergence delta(g, f) = integral g ln(g / f).
double kl_divergence(const DensityEstimate& g, const DensityEstimate& f,
                     const QuadratureGrid& quad);

/// Pearson divergence PE(g, f) = integral g (f/g - 1)^2.
double pearson_divergence(const DensityEstimate& g, const DensityEstimate& f,
                          const QuadratureGrid& quad);

/// Relative Pearson divergence rPE(g, f) = PE(h_alpha, f) with the mixture
/// h_alpha = alpha f + (1 - alpha) g.  Requires 0 <= alpha < 1; alpha = 0
/// recovers pearson_divergence exactly.
double relative_pearson(const DensityEstimate& g, const DensityEstimate& f,
                        double alpha, const QuadratureGrid& quad);

/// Evaluates any measure on a shared quadrature grid; `alpha` applies to
/// Measure::rpe only.
DivergenceValue evaluate_measure(Measure m, const DensityEstimate& g,
                                 const DensityEstimate& f,
                                 const QuadratureGrid& quad,
                                 double alpha = 0.5);

}  // namespace mde
