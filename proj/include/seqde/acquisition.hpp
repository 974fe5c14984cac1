// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Next-point criterion: how far apart would the upper and lower
// confidence-bound pushforwards be if we committed to a proposal and observed
// the current posterior mean there? Observing the mean leaves the mean field
// unchanged and collapses the variance at the proposal, so the criterion
// isolates the variance reduction a sample buys in pdf space. Also provides
// the asymptotic form of that distance and its closed-form lower bound for
// monotone one-dimensional maps, used as diagnostics.

#ifndef SEQDE_ACQUISITION_HPP
#define SEQDE_ACQUISITION_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "seqde/density.hpp"
#include "seqde/errors.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"

namespace seqde {

enum class CriterionMetric { LogL1, L2 };

struct CriterionConfig {
  double alpha = 1.96;
  int bins = 60;
  CriterionMetric metric = CriterionMetric::LogL1;
  const QuadratureGrid* grid = nullptr;

  void validate() const {
    if (!(alpha > 0.0)) throw ConfigError("criterion alpha must be positive");
    if (bins < 10) throw ConfigError("criterion needs at least 10 bins");
    if (grid == nullptr || grid->size() == 0)
      throw ConfigError("criterion requires a nonempty quadrature grid");
  }
};

// Evaluates the criterion for many proposals against one posterior. The grid
// prediction (mean, variance, solved kernel columns) is computed once; each
// proposal then costs one forward solve plus O(n N) dot products, the same
// numbers a full append-and-refit would produce.
class CriterionEvaluator {
public:
  CriterionEvaluator(const GpPosterior& gp, const CriterionConfig& cfg)
      : gp_(&gp), cfg_(cfg) {
    cfg_.validate();
    if (cfg_.grid->dimension() != gp.data().dimension())
      throw DimensionMismatch("quadrature grid dimension " +
                              std::to_string(cfg_.grid->dimension()) +
                              " does not match posterior dimension " +
                              std::to_string(gp.data().dimension()));
    pred_ = gp.predict(cfg_.grid->nodes);
    sigma_ = pred_.variance.cwiseSqrt();
    baseline_ = bound_distance(sigma_);
  }

  // Distance between the bound pdfs of the unmodified posterior.
  double baseline() const { return baseline_; }

  const GridPrediction& prediction() const { return pred_; }

  // A proposal that duplicates a design point adds no information and scores
  // the baseline distance.
  double operator()(const Eigen::VectorXd& theta_star) const {
    const GpPosterior& gp = *gp_;
    if (gp.data().distance_to(theta_star) < Dataset::MIN_SEPARATION)
      return baseline_;
    const KernelHyperparams& hp = gp.hyperparams();
    const Eigen::VectorXd l21 =
        gp.chol_factor().triangularView<Eigen::Lower>().solve(
            gp.kernel_vector(theta_star));
    const double d = hp.signal_variance + hp.jitter - l21.squaredNorm();
    if (!(d > 0.0))
      throw FactorizationFailure(
          "hypothetical augmentation lost positive definiteness");
    const double l22 = std::sqrt(d);

    const Eigen::MatrixXd& nodes = cfg_.grid->nodes;
    const long N = nodes.rows();
    const int m = static_cast<int>(nodes.cols());
    const Eigen::VectorXd cross = pred_.solved.transpose() * l21;
    Eigen::VectorXd sigma_aug(N);
    for (long j = 0; j < N; ++j) {
      double s = 0.0;
      for (int dd = 0; dd < m; ++dd) {
        const double z = (nodes(j, dd) - theta_star[dd]) / hp.lengthscales[dd];
        s += z * z;
      }
      const double k = hp.signal_variance * std::exp(-0.5 * s);
      const double w = (k - cross[j]) / l22;
      const double v = pred_.variance[j] - w * w;
      sigma_aug[j] = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return bound_distance(sigma_aug);
  }

private:
  double bound_distance(const Eigen::VectorXd& sigma) const {
    const BoundPdfs bp = bound_pdfs_from_fields(
        pred_.mean + cfg_.alpha * sigma, pred_.mean - cfg_.alpha * sigma,
        cfg_.grid->weights, cfg_.bins);
    if (cfg_.metric == CriterionMetric::L2)
      return l2_distance(bp.plus, bp.minus);
    try {
      return log_l1_distance(bp.plus, bp.minus);
    } catch (const NoOverlap&) {
      // the distance integrates over the region where both pdfs are
      // positive; an empty region integrates to zero
      return 0.0;
    }
  }

  const GpPosterior* gp_;
  CriterionConfig cfg_;
  GridPrediction pred_;
  Eigen::VectorXd sigma_;
  double baseline_;
};

inline double criterion(const Eigen::VectorXd& theta_star,
                        const GpPosterior& gp, const CriterionConfig& cfg) {
  return CriterionEvaluator(gp, cfg)(theta_star);
}

// Asymptotic form of the log-L1 bound distance for small sigma fields:
// the integral of |d/ds E(sigma(theta) 1_{T(theta)=s})| / f(s) over the
// observable range, with the level-set expectation binned on the same
// co-domain edges as the pushforward pdf and differentiated by central
// differences on bin centers. Edges span the value range exactly (no
// padding): a partially covered edge bin would fake a steep derivative over
// a near-empty bin and the 1/f weighting would blow it up.
inline double asymptotic_q_fields(const Eigen::VectorXd& means,
                                  const Eigen::VectorXd& sigmas,
                                  const Eigen::VectorXd& weights, int bins) {
  if (means.size() != sigmas.size() || means.size() != weights.size())
    throw DimensionMismatch("mean, sigma, and weight fields differ in length");
  if (bins < 10) throw ConfigError("need at least 10 bins");
  const double lo = means.minCoeff();
  const double hi = means.maxCoeff();
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error("mean field contains a non-finite entry");
  if (hi - lo < 1e-14) return 0.0;

  Eigen::VectorXd edges(bins + 1);
  edges.setLinSpaced(bins + 1, lo, hi);
  const DensityEstimate push = histogram(means, weights, edges);
  const int B = push.bins();
  const double width = push.width(0);

  const double total = weights.sum();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(B);
  for (long i = 0; i < means.size(); ++i) {
    int b = static_cast<int>((means[i] - lo) / width);
    if (b < 0) b = 0;
    if (b >= B) b = B - 1;
    g[b] += sigmas[i] * weights[i];
  }
  g /= width * total;

  double acc = 0.0;
  bool any = false;
  for (int b = 0; b < B; ++b) {
    if (!push.supported(b)) continue;
    double dg;
    if (b == 0)
      dg = (g[1] - g[0]) / width;
    else if (b == B - 1)
      dg = (g[B - 1] - g[B - 2]) / width;
    else
      dg = (g[b + 1] - g[b - 1]) / (2.0 * width);
    acc += std::abs(dg) / push.pdf[b] * width;
    any = true;
  }
  if (!any) throw NoOverlap("pushforward has no bins above the support floor");
  return acc;
}

// Sigma enters scaled by cfg.alpha so the value is comparable with the
// criterion baseline, which spreads the bounds by alpha sigma; alpha = 1
// gives the unscaled form.
inline double asymptotic_q(const GpPosterior& gp, const CriterionConfig& cfg) {
  cfg.validate();
  if (cfg.grid->dimension() != gp.data().dimension())
    throw DimensionMismatch("quadrature grid dimension does not match data");
  const GridPrediction pred = gp.predict(cfg.grid->nodes);
  const Eigen::VectorXd sigmas = cfg.alpha * pred.variance.cwiseSqrt();
  return asymptotic_q_fields(pred.mean, sigmas, cfg.grid->weights, cfg.bins);
}

// Lower bound of the asymptotic distance for a one-dimensional input and a
// monotone increasing mean map:
//   | int sigma d(log f) - int sigma d(log T') + sigma(u2) - sigma(u1) |.
// The log T' term enters negatively: the bound is |int d(sigma f / T')/f|,
// and (sigma f / T')' / (f / T') = sigma' + sigma (log f)' - sigma (log T')'.
// Nodes must be sorted ascending; slopes are taken between adjacent nodes
// and their log-differences weighted by sigma at the shared node.
inline double corollary_bound_fields(const Eigen::VectorXd& thetas,
                                     const Eigen::VectorXd& means,
                                     const Eigen::VectorXd& sigmas,
                                     const Eigen::VectorXd& densities) {
  const long N = thetas.size();
  if (means.size() != N || sigmas.size() != N || densities.size() != N)
    throw DimensionMismatch("corollary fields differ in length");
  if (N < 3) throw Error("need at least three grid nodes");
  for (long i = 0; i + 1 < N; ++i) {
    if (!(thetas[i + 1] > thetas[i]))
      throw Error("grid nodes must be strictly increasing");
    if (means[i + 1] - means[i] < -1e-10)
      throw NotMonotone("mean map decreases on the grid near theta=" +
                        std::to_string(thetas[i]));
  }

  double term_f = 0.0;
  for (long i = 0; i + 1 < N; ++i) {
    const double lf1 = std::log(std::max(densities[i], 1e-300));
    const double lf2 = std::log(std::max(densities[i + 1], 1e-300));
    term_f += 0.5 * (sigmas[i] + sigmas[i + 1]) * (lf2 - lf1);
  }

  double term_t = 0.0;
  for (long i = 0; i + 2 < N; ++i) {
    const double m1 =
        std::max((means[i + 1] - means[i]) / (thetas[i + 1] - thetas[i]),
                 1e-15);
    const double m2 =
        std::max((means[i + 2] - means[i + 1]) / (thetas[i + 2] - thetas[i + 1]),
                 1e-15);
    term_t += sigmas[i + 1] * (std::log(m2) - std::log(m1));
  }

  const double boundary = sigmas[N - 1] - sigmas[0];
  return std::abs(term_f - term_t + boundary);
}

inline double corollary_bound(const GpPosterior& gp,
                              const InputDistribution& input,
                              int resolution = 1024) {
  if (input.dimension() != 1)
    throw ConfigError("corollary bound requires a one-dimensional input");
  if (gp.data().dimension() != 1)
    throw DimensionMismatch("posterior is not one-dimensional");
  const QuadratureGrid grid =
      quadrature_grid(input, std::vector<int>{resolution});
  const GridPrediction pred = gp.predict(grid.nodes);
  Eigen::VectorXd dens(grid.size());
  for (long i = 0; i < grid.size(); ++i)
    dens[i] = input.density(grid.nodes.row(i).transpose());
  return corollary_bound_fields(grid.nodes.col(0), pred.mean,
                                pred.variance.cwiseSqrt(), dens);
}

} // namespace seqde

#endif // SEQDE_ACQUISITION_HPP
