#include "mde/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mde/errors.hpp"

namespace mde {

bool is_similarity(Measure m) { return m == Measure::affinity; }

std::string to_string(Measure m) {
  switch (m) {
    case Measure::affinity: return "affinity";
    case Measure::squared_hellinger: return "hellinger";
    case Measure::bhattacharyya: return "bhattacharyya";
    case Measure::kl: return "kl";
    case Measure::pe: return "pe";
    case Measure::rpe: return "rpe";
  }
  throw std::invalid_argument("to_string: unknown measure");
}

Measure measure_from_string(const std::string& name) {
  if (name == "affinity") return Measure::affinity;
  if (name == "hellinger") return Measure::squared_hellinger;
  if (name == "bhattacharyya") return Measure::bhattacharyya;
  if (name == "kl") return Measure::kl;
  if (name == "pe") return Measure::pe;
  if (name == "rpe") return Measure::rpe;
  throw std::invalid_argument(
      "unknown measure '" + name +
      "' (expected affinity, hellinger, bhattacharyya, kl, pe, or rpe)");
}

double QuadratureGrid::cell_area() const {
  return (x_hi - x_lo) / static_cast<double>(nx) * (y_hi - y_lo) /
         static_cast<double>(ny);
}

namespace {
std::vector<double> midpoints(double lo, double hi, std::size_t n) {
  const double step = (hi - lo) / static_cast<double>(n);
  std::vector<double> nodes(n);
  for (std::size_t a = 0; a < n; ++a) {
    nodes[a] = lo + (static_cast<double>(a) + 0.5) * step;
  }
  return nodes;
}
}  // namespace

std::vector<double> QuadratureGrid::x_nodes() const {
  return midpoints(x_lo, x_hi, nx);
}

std::vector<double> QuadratureGrid::y_nodes() const {
  return midpoints(y_lo, y_hi, ny);
}

QuadratureGrid make_quadrature(const DensityEstimate& f,
                               const DensityEstimate& g, std::size_t nx,
                               std::size_t ny) {
  if (nx < 16 || ny < 16) {
    throw std::invalid_argument("make_quadrature: resolution must be at least 16x16");
  }
  const auto bf = f.bounding_box();
  const auto bg = g.bounding_box();
  const double pad = 5.0 * std::max(f.bandwidth(), g.bandwidth());
  QuadratureGrid quad;
  quad.x_lo = std::min(bf[0], bg[0]) - pad;
  quad.x_hi = std::max(bf[1], bg[1]) + pad;
  quad.y_lo = std::min(bf[2], bg[2]) - pad;
  quad.y_hi = std::max(bf[3], bg[3]) + pad;
  quad.nx = nx;
  quad.ny = ny;
  if (!(quad.x_hi > quad.x_lo) || !(quad.y_hi > quad.y_lo)) {
    throw numerical_error("make_quadrature: empty integration window");
  }
  return quad;
}

namespace {
// Evaluates both densities on the quadrature nodes and folds fn(g_i, f_i)
// over all nodes, scaled by the cell area at the end.
template <typename Fn>
double integrate(const DensityEstimate& g, const DensityEstimate& f,
                 const QuadratureGrid& quad, Fn&& fn) {
  const auto xs = quad.x_nodes();
  const auto ys = quad.y_nodes();
  const Eigen::MatrixXd gd = g.evaluate_grid(xs, ys);
  const Eigen::MatrixXd fd = f.evaluate_grid(xs, ys);
  double acc = 0.0;
  for (Eigen::Index c = 0; c < gd.cols(); ++c) {
    for (Eigen::Index r = 0; r < gd.rows(); ++r) {
      acc += fn(gd(r, c), fd(r, c));
    }
  }
  const double value = acc * quad.cell_area();
  if (!std::isfinite(value)) {
    throw numerical_error("divergence quadrature produced a non-finite value");
  }
  return value;
}
}  // namespace

double hellinger_affinity(const DensityEstimate& g, const DensityEstimate& f,
                          const QuadratureGrid& quad) {
  const double rho = integrate(
      g, f, quad, [](double gv, double fv) { return std::sqrt(gv * fv); });
  return std::clamp(rho, 0.0, 1.0);
}

std::pair<double, double> affinity_to_distances(double rho) {
  constexpr double tol = 1e-6;
  if (!(rho >= -tol) || !(rho <= 1.0 + tol)) {
    throw std::invalid_argument("affinity_to_distances: rho=" +
                                std::to_string(rho) + " outside [0, 1]");
  }
  const double clamped = std::clamp(rho, 0.0, 1.0);
  const double hd = 2.0 * (1.0 - clamped);
  const double b = clamped > 0.0 ? -std::log(clamped)
                                 : std::numeric_limits<double>::infinity();
  return {hd, b};
}

double kl_divergence(const DensityEstimate& g, const DensityEstimate& f,
                     const QuadratureGrid& quad) {
  return integrate(g, f, quad, [](double gv, double fv) {
    if (fv < kDensityFloor) return 0.0;  // denominator vanished: skip
    const double gfloored = std::max(gv, kDensityFloor);
    return gfloored * std::log(gfloored / fv);
  });
}

double pearson_divergence(const DensityEstimate& g, const DensityEstimate& f,
                          const QuadratureGrid& quad) {
  // g (f/g - 1)^2 is computed as (f - g)^2 / g: same value, but it cannot
  // overflow prematurely when g sits just above the floor.
  return integrate(g, f, quad, [](double gv, double fv) {
    if (gv < kDensityFloor) return 0.0;  // denominator vanished: skip
    const double d = std::max(fv, kDensityFloor) - gv;
    return d * d / gv;
  });
}

double relative_pearson(const DensityEstimate& g, const DensityEstimate& f,
                        double alpha, const QuadratureGrid& quad) {
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("relative_pearson: alpha must lie in [0, 1)");
  }
  // The mixture denominator bounds the ratio f / h_alpha by 1 / alpha, which
  // is what keeps the relative divergence finite when supports barely
  // overlap.  alpha = 0 makes h_alpha identical to g, bit for bit, so the
  // value coincides with pearson_divergence exactly.
  return integrate(g, f, quad, [alpha](double gv, double fv) {
    const double hv = alpha * fv + (1.0 - alpha) * gv;
    if (hv < kDensityFloor) return 0.0;  // denominator vanished: skip
    const double d = std::max(fv, kDensityFloor) - hv;
    return d * d / hv;
  });
}

DivergenceValue evaluate_measure(Measure m, const DensityEstimate& g,
                                 const DensityEstimate& f,
                                 const QuadratureGrid& quad, double alpha) {
  DivergenceValue out;
  out.measure = m;
  switch (m) {
    case Measure::affinity:
      out.value = hellinger_affinity(g, f, quad);
      break;
    case Measure::squared_hellinger:
      out.value = affinity_to_distances(hellinger_affinity(g, f, quad)).first;
      break;
    case Measure::bhattacharyya:
      out.value = affinity_to_distances(hellinger_affinity(g, f, quad)).second;
      break;
    case Measure::kl:
      out.value = kl_divergence(g, f, quad);
      break;
    case Measure::pe:
      out.value = pearson_divergence(g, f, quad);
      break;
    case Measure::rpe:
      out.value = relative_pearson(g, f, alpha, quad);
      out.alpha = alpha;
      break;
  }
  return out;
}

}  // namespace mde
