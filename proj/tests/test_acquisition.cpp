// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "seqde/acquisition.hpp"
#include "seqde/density.hpp"
#include "seqde/errors.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"

namespace {

using namespace seqde;

Eigen::VectorXd point1(double x) {
  Eigen::VectorXd p(1);
  p[0] = x;
  return p;
}

Dataset make_design(const std::vector<double>& xs, double (*f)(double)) {
  Dataset data(1);
  for (double x : xs) data.add(point1(x), f(x));
  return data;
}

std::vector<double> uniform_design(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

double wavy(double x) { return std::sin(2.0 * x) + 0.3 * x * x; }
double gentle(double x) { return std::sin(x) + 0.5 * x; }
double cubic_map(double x) { return x + 0.3 * x * x * x; }

TEST(Acquisition, ConfigValidation) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {50});
  CriterionConfig cfg;
  cfg.grid = &grid;
  EXPECT_NO_THROW(cfg.validate());
  CriterionConfig bad = cfg;
  bad.alpha = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.bins = 9;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.grid = nullptr;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Acquisition, DuplicateProposalScoresBaseline) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {200});
  const Dataset data = make_design({-2.0, 0.3, 1.7}, gentle);
  const GpPosterior gp =
      GpPosterior::fit(data, make_hyperparams(1.2, point1(1.0)));
  CriterionConfig cfg;
  cfg.bins = 40;
  cfg.grid = &grid;
  const CriterionEvaluator eval(gp, cfg);
  for (int i = 0; i < data.size(); ++i)
    EXPECT_EQ(eval(data.point(i)), eval.baseline());
  EXPECT_EQ(eval(point1(0.3 + 2e-10)), eval.baseline());
}

TEST(Acquisition, MatchesFullRefitPipeline) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {300});
  const Dataset data = make_design({-2.0, 0.3, 1.7}, gentle);
  const KernelHyperparams hp = make_hyperparams(1.2, point1(1.0));
  const GpPosterior gp = GpPosterior::fit(data, hp);
  const std::vector<double> probes = {-3.1, -1.0, 0.9, 2.4, 3.6};
  for (CriterionMetric metric : {CriterionMetric::LogL1, CriterionMetric::L2}) {
    CriterionConfig cfg;
    cfg.bins = 40;
    cfg.metric = metric;
    cfg.grid = &grid;
    const CriterionEvaluator eval(gp, cfg);
    for (double x : probes) {
      const Eigen::VectorXd star = point1(x);
      Dataset augmented = gp.data();
      augmented.add(star, gp.mean(star));
      const GpPosterior refit =
          GpPosterior::fit(augmented, hp, gp.prior_mean());
      const BoundPdfs bp = bound_pdfs(refit, grid, cfg.alpha, cfg.bins);
      const double expected = metric == CriterionMetric::LogL1
                                  ? log_l1_distance(bp.plus, bp.minus)
                                  : l2_distance(bp.plus, bp.minus);
      EXPECT_NEAR(eval(star), expected, 1e-8) << "probe " << x;
    }
  }
}

TEST(Acquisition, MinCriterionDecreasesWithDenserData) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {300});
  std::vector<double> coarse = uniform_design(-3.8, 3.8, 20);
  std::vector<double> fine = coarse;
  for (double x : coarse) fine.push_back(x + 0.2);
  const KernelHyperparams hp = make_hyperparams(1.0, point1(0.6), 1e-6);
  const GpPosterior gp20 = GpPosterior::fit(make_design(coarse, wavy), hp);
  const GpPosterior gp40 = GpPosterior::fit(make_design(fine, wavy), hp);
  CriterionConfig cfg;
  cfg.bins = 40;
  cfg.grid = &grid;
  const CriterionEvaluator eval20(gp20, cfg);
  const CriterionEvaluator eval40(gp40, cfg);
  const std::vector<double> probes = {-3.5, -2.0, -1.0, 0.5, 1.5, 2.8, 3.7};
  double min20 = eval20.baseline();
  double min40 = eval40.baseline();
  for (double x : probes) {
    min20 = std::min(min20, eval20(point1(x)));
    min40 = std::min(min40, eval40(point1(x)));
  }
  EXPECT_LT(min40, min20);
}

TEST(Acquisition, EvaluationLeavesPosteriorUntouched) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {150});
  const Dataset data = make_design({-2.5, -1.0, 0.0, 1.2, 2.9}, gentle);
  const GpPosterior gp =
      GpPosterior::fit(data, make_hyperparams(1.0, point1(0.8)));
  const GridPrediction before = gp.predict(grid.nodes);
  CriterionConfig cfg;
  cfg.bins = 30;
  cfg.grid = &grid;
  const CriterionEvaluator eval(gp, cfg);
  eval(point1(0.4));
  eval(point1(-3.2));
  eval(point1(2.0));
  asymptotic_q(gp, cfg);
  const GridPrediction after = gp.predict(grid.nodes);
  EXPECT_EQ((before.mean - after.mean).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((before.variance - after.variance).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Acquisition, InvariantUnderNodeRelabeling) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  QuadratureGrid grid = quadrature_grid(input, {201});
  QuadratureGrid shuffled = grid;
  const long N = grid.size();
  for (long i = 0; i < N; ++i) {
    const long j = (i * 131) % N; // 131 coprime with 201: a permutation
    shuffled.nodes.row(i) = grid.nodes.row(j);
    shuffled.weights[i] = grid.weights[j];
  }
  const Dataset data = make_design({-2.0, 0.3, 1.7}, gentle);
  const GpPosterior gp =
      GpPosterior::fit(data, make_hyperparams(1.2, point1(1.0)));
  CriterionConfig cfg;
  cfg.bins = 40;
  cfg.grid = &grid;
  CriterionConfig cfg_shuffled = cfg;
  cfg_shuffled.grid = &shuffled;
  const CriterionEvaluator a(gp, cfg);
  const CriterionEvaluator b(gp, cfg_shuffled);
  const double va = a(point1(0.9));
  const double vb = b(point1(0.9));
  EXPECT_NEAR(va, vb, 1e-12 * std::max(1.0, std::abs(va)));
}

TEST(Acquisition, AsymptoticZeroSigmaIsZero) {
  const long N = 200;
  Eigen::VectorXd means(N);
  means.setLinSpaced(N, -1.0, 1.0);
  const Eigen::VectorXd sigmas = Eigen::VectorXd::Zero(N);
  const Eigen::VectorXd weights = Eigen::VectorXd::Constant(N, 1.0 / N);
  EXPECT_EQ(asymptotic_q_fields(means, sigmas, weights, 20), 0.0);
}

TEST(Acquisition, AsymptoticConstantSigmaMatchesQuadratureOracle) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {2000});
  const Eigen::VectorXd means = grid.nodes.col(0);
  const double c = 0.37;
  const Eigen::VectorXd sigmas = Eigen::VectorXd::Constant(grid.size(), c);
  const double got = asymptotic_q_fields(means, sigmas, grid.weights, 100);
  // identity map of a standard normal: |f'/f| = |s|, so the integral over
  // [-a, a] is c * a^2
  const double a = means.maxCoeff();
  const double expected = c * a * a;
  EXPECT_NEAR(got, expected, 0.02 * expected);
}

TEST(Acquisition, CorollaryUniformConstantSigmaCancels) {
  const long N = 50;
  Eigen::VectorXd thetas(N);
  thetas.setLinSpaced(N, 0.0, 1.0);
  const Eigen::VectorXd means = thetas;
  const Eigen::VectorXd sigmas = Eigen::VectorXd::Constant(N, 0.4);
  const Eigen::VectorXd densities = Eigen::VectorXd::Constant(N, 1.0);
  EXPECT_NEAR(corollary_bound_fields(thetas, means, sigmas, densities), 0.0,
              1e-10);
}

TEST(Acquisition, CorollaryRejectsNonMonotoneMeanMap) {
  const long N = 50;
  Eigen::VectorXd thetas(N);
  thetas.setLinSpaced(N, 0.0, 1.0);
  Eigen::VectorXd means = thetas;
  means[25] -= 0.5;
  const Eigen::VectorXd sigmas = Eigen::VectorXd::Constant(N, 0.4);
  const Eigen::VectorXd densities = Eigen::VectorXd::Constant(N, 1.0);
  EXPECT_THROW(corollary_bound_fields(thetas, means, sigmas, densities),
               NotMonotone);
}

TEST(Acquisition, AsymptoticDominatesCorollaryOnSmoothInstance) {
  const InputDistribution input =
      InputDistribution::gaussian_diagonal(point1(1.0));
  const QuadratureGrid grid = quadrature_grid(input, {1024});
  const Dataset data = make_design(uniform_design(-4.0, 4.0, 35), cubic_map);
  const KernelHyperparams hp = make_hyperparams(1.0, point1(0.5), 1e-6);
  const GpPosterior gp = GpPosterior::fit(data, hp);
  CriterionConfig cfg;
  cfg.alpha = 1.0;
  cfg.bins = 60;
  cfg.grid = &grid;
  const double asym = asymptotic_q(gp, cfg);
  const double bound = corollary_bound(gp, input, 1024);
  EXPECT_GT(asym, 0.0);
  EXPECT_GT(bound, 0.0);
  EXPECT_GE(asym, bound - 1e-6);
}

} // namespace
