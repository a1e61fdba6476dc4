#include "mde/ratio.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mde/errors.hpp"

namespace mde {

namespace {

Eigen::MatrixXd basis_matrix(const VelocityDataset& points,
                             const VelocityDataset& centers, double width) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto b = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd phi(n, b);
  const double inv = 1.0 / (2.0 * width * width);
  for (Eigen::Index c = 0; c < b; ++c) {
    const double cx = centers.v1[static_cast<std::size_t>(c)];
    const double cy = centers.v2[static_cast<std::size_t>(c)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dx = points.v1[static_cast<std::size_t>(i)] - cx;
      const double dy = points.v2[static_cast<std::size_t>(i)] - cy;
      phi(i, c) = -(dx * dx + dy * dy) * inv;
    }
  }
  return phi.array().exp().matrix();
}

// Median pairwise Euclidean distance of the pooled sample; at most `cap`
// points participate (a uniform subsample keeps the cost quadratic-small).
double median_pairwise_distance(const VelocityDataset& a,
                                const VelocityDataset& b, std::size_t cap,
                                Rng& rng) {
  VelocityDataset pool;
  pool.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) pool.append(a.v1[i], a.v2[i]);
  for (std::size_t i = 0; i < b.size(); ++i) pool.append(b.v1[i], b.v2[i]);
  if (pool.size() > cap) {
    // Partial Fisher-Yates: the first `cap` slots become the subsample.
    for (std::size_t i = 0; i < cap; ++i) {
      const std::size_t pick = i + rng.uniform_index(pool.size() - i);
      std::swap(pool.v1[i], pool.v1[pick]);
      std::swap(pool.v2[i], pool.v2[pick]);
    }
    pool.v1.resize(cap);
    pool.v2.resize(cap);
  }
  std::vector<double> dists;
  dists.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const double dx = pool.v1[i] - pool.v1[j];
      const double dy = pool.v2[i] - pool.v2[j];
      dists.push_back(std::sqrt(dx * dx + dy * dy));
    }
  }
  if (dists.empty()) {
    throw data_error("ratio fit: pooled sample has fewer than two points");
  }
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid),
                   dists.end());
  return dists[mid];
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& hmat,
                            const Eigen::VectorXd& rhs, double ridge) {
  Eigen::MatrixXd reg = hmat;
  reg.diagonal().array() += ridge;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
  if (ldlt.info() != Eigen::Success) {
    throw numerical_error("ratio fit: linear system is singular after ridge");
  }
  Eigen::VectorXd theta = ldlt.solve(rhs);
  if (!theta.allFinite()) {
    throw numerical_error("ratio fit: linear solve produced non-finite weights");
  }
  return theta;
}

struct FoldSplit {
  std::vector<int> fold_of;  // per row
  int k = 0;
};

FoldSplit assign_folds(std::size_t n, int k, Rng& rng) {
  FoldSplit split;
  split.k = k;
  split.fold_of.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t pick = i + rng.uniform_index(n - i);
    std::swap(order[i], order[pick]);
  }
  for (std::size_t pos = 0; pos < n; ++pos) {
    split.fold_of[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return split;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<int>& fold_of,
                          int fold, bool complement) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const bool in_fold = fold_of[static_cast<std::size_t>(i)] == fold;
    if (in_fold != complement) rows.push_back(i);
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    out.row(r) = m.row(rows[static_cast<std::size_t>(r)]);
  }
  return out;
}

// Squared-loss objective 1/2 E_h[w^2] - E_f[w] evaluated on held-out rows.
double holdout_objective(const Eigen::MatrixXd& phi_f, const Eigen::MatrixXd& phi_g,
                         const Eigen::VectorXd& theta, double alpha) {
  const Eigen::VectorXd wf = phi_f * theta;
  const Eigen::VectorXd wg = phi_g * theta;
  const double mf2 = wf.squaredNorm() / static_cast<double>(wf.size());
  const double mg2 = wg.squaredNorm() / static_cast<double>(wg.size());
  const double mf1 = wf.mean();
  return 0.5 * (alpha * mf2 + (1.0 - alpha) * mg2) - mf1;
}

}  // namespace

double RatioModel::operator()(double x, double y) const {
  const double inv = 1.0 / (2.0 * kernel_width * kernel_width);
  double acc = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double dx = x - centers.v1[c];
    const double dy = y - centers.v2[c];
    acc += weights[c] * std::exp(-(dx * dx + dy * dy) * inv);
  }
  return acc;
}

std::vector<double> default_width_multipliers() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

std::vector<double> default_ridge_candidates() { return {1e-3, 1e-2, 1e-1, 1.0}; }

RatioModel fit_relative_ratio(const VelocityDataset& numer,
                              const VelocityDataset& denom, double alpha,
                              std::size_t b,
                              const std::vector<double>& width_multipliers,
                              const std::vector<double>& ridge_candidates,
                              Rng& rng) {
  require_valid(numer, 1, "ratio numerator sample");
  require_valid(denom, 1, "ratio denominator sample");
  if (b < 1) throw std::invalid_argument("fit_relative_ratio: b must be at least 1");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("fit_relative_ratio: alpha must lie in [0, 1)");
  }
  if (width_multipliers.empty() || ridge_candidates.empty()) {
    throw std::invalid_argument("fit_relative_ratio: candidate lists must be nonempty");
  }
  for (double w : width_multipliers) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("fit_relative_ratio: width multipliers must be positive");
    }
  }
  for (double r : ridge_candidates) {
    if (!(r >= 0.0)) {
      throw std::invalid_argument("fit_relative_ratio: ridge candidates must be nonnegative");
    }
  }

  const double med = median_pairwise_distance(numer, denom, 500, rng);
  if (!(med > 0.0)) {
    throw data_error("ratio fit: pooled sample is degenerate (zero median pairwise distance)");
  }

  // Draw basis centers uniformly without replacement from the numerator.
  const std::size_t nb = std::min(b, numer.size());
  std::vector<std::size_t> idx(numer.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t pick = i + rng.uniform_index(idx.size() - i);
    std::swap(idx[i], idx[pick]);
  }
  VelocityDataset centers;
  centers.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    centers.append(numer.v1[idx[i]], numer.v2[idx[i]]);
  }

  const auto nf = static_cast<double>(numer.size());
  const auto ng = static_cast<double>(denom.size());

  // Hyperparameter selection: 5-fold cross-validation of the held-out
  // squared-loss objective.  With fewer than two usable folds there is
  // nothing to cross-validate; the first candidates are used as-is.
  const int k = static_cast<int>(std::min<std::size_t>(5, std::min(numer.size(), denom.size())));
  double best_width = width_multipliers.front() * med;
  double best_ridge = ridge_candidates.front();
  if (k >= 2) {
    const FoldSplit folds_f = assign_folds(numer.size(), k, rng);
    const FoldSplit folds_g = assign_folds(denom.size(), k, rng);
    double best_score = std::numeric_limits<double>::infinity();
    for (double wm : width_multipliers) {
      const double width = wm * med;
      const Eigen::MatrixXd phi_f = basis_matrix(numer, centers, width);
      const Eigen::MatrixXd phi_g = basis_matrix(denom, centers, width);
      for (double ridge : ridge_candidates) {
        double score = 0.0;
        for (int fold = 0; fold < k; ++fold) {
          const Eigen::MatrixXd f_tr = take_rows(phi_f, folds_f.fold_of, fold, true);
          const Eigen::MatrixXd g_tr = take_rows(phi_g, folds_g.fold_of, fold, true);
          const Eigen::MatrixXd f_te = take_rows(phi_f, folds_f.fold_of, fold, false);
          const Eigen::MatrixXd g_te = take_rows(phi_g, folds_g.fold_of, fold, false);
          if (f_tr.rows() == 0 || g_tr.rows() == 0 || f_te.rows() == 0 ||
              g_te.rows() == 0) {
            continue;
          }
          const Eigen::MatrixXd hmat =
              (alpha / static_cast<double>(f_tr.rows())) * (f_tr.transpose() * f_tr) +
              ((1.0 - alpha) / static_cast<double>(g_tr.rows())) * (g_tr.transpose() * g_tr);
          const Eigen::VectorXd rhs = f_tr.colwise().mean();
          const Eigen::VectorXd theta = solve_ridge(hmat, rhs, ridge);
          score += holdout_objective(f_te, g_te, theta, alpha);
        }
        if (score < best_score) {
          best_score = score;
          best_width = width;
          best_ridge = ridge;
        }
      }
    }
  }

  // Final fit on the full samples with the selected hyperparameters.
  const Eigen::MatrixXd phi_f = basis_matrix(numer, centers, best_width);
  const Eigen::MatrixXd phi_g = basis_matrix(denom, centers, best_width);
  const Eigen::MatrixXd hmat = (alpha / nf) * (phi_f.transpose() * phi_f) +
                               ((1.0 - alpha) / ng) * (phi_g.transpose() * phi_g);
  const Eigen::VectorXd rhs = phi_f.colwise().mean();
  const Eigen::VectorXd theta = solve_ridge(hmat, rhs, best_ridge);

  RatioModel model;
  model.centers = std::move(centers);
  model.weights.assign(theta.data(), theta.data() + theta.size());
  model.kernel_width = best_width;
  model.alpha = alpha;
  model.ridge = best_ridge;
  return model;
}

RatioModel fit_relative_ratio(const VelocityDataset& numer,
                              const VelocityDataset& denom, double alpha,
                              Rng& rng) {
  return fit_relative_ratio(numer, denom, alpha, std::min<std::size_t>(100, numer.size()),
                            default_width_multipliers(), default_ridge_candidates(), rng);
}

double direct_rpe(const RatioModel& model, const VelocityDataset& numer,
                  const VelocityDataset& denom) {
  double mf1 = 0.0, mf2 = 0.0, mg2 = 0.0;
  for (std::size_t i = 0; i < numer.size(); ++i) {
    const double w = model(numer.v1[i], numer.v2[i]);
    mf1 += w;
    mf2 += w * w;
  }
  for (std::size_t i = 0; i < denom.size(); ++i) {
    const double w = model(denom.v1[i], denom.v2[i]);
    mg2 += w * w;
  }
  mf1 /= static_cast<double>(numer.size());
  mf2 /= static_cast<double>(numer.size());
  mg2 /= static_cast<double>(denom.size());
  // Expansion of PE(h_alpha, f) = E_h[w^2] - 1 with E_h[w^2] symmetrized as
  // 2 E_f[w] - (alpha E_f[w^2] + (1-alpha) E_g[w^2]); both moment identities
  // hold at the true ratio, and the combination is the standard
  // least-squares form.
  return -model.alpha * mf2 - (1.0 - model.alpha) * mg2 + 2.0 * mf1 - 1.0;
}

}  // namespace mde
