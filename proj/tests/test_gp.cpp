// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "seqde/gp.hpp"
#include "seqde/rng.hpp"

#include "oracles.hpp"

using seqde::Dataset;
using seqde::GpPosterior;
using seqde::KernelHyperparams;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

// smooth analytic target, safe for the interpolation tolerance
double smooth_target(const Eigen::VectorXd& theta) {
  double s = 0.0;
  for (long d = 0; d < theta.size(); ++d) s += (d + 1.0) * theta[d];
  return std::sin(s) + 0.3 * s;
}

Dataset random_smooth_dataset(int n, int m, seqde::Rng& rng,
                              double box = 2.0) {
  Dataset data(m);
  while (data.size() < n) {
    Eigen::VectorXd theta(m);
    for (int d = 0; d < m; ++d) theta[d] = rng.uniform(-box, box);
    if (data.size() > 0 && data.distance_to(theta) < 1e-3) continue;
    data.add(theta, smooth_target(theta));
  }
  return data;
}

} // namespace

TEST(Gp, SinglePointPosterior) {
  Dataset data(1);
  data.add(vec1(0.0), 1.0);
  const auto hp = seqde::make_hyperparams(1.0, vec1(1.0));
  const auto gp = GpPosterior::fit(data, hp, 0.0);
  EXPECT_NEAR(gp.mean(vec1(0.0)), 1.0, 1e-8 * 2.0);
  EXPECT_LE(gp.variance(vec1(0.0)), 1e-8);
  EXPECT_GE(gp.variance(vec1(0.0)), 0.0);
  // far from the data the posterior reverts to the prior
  EXPECT_NEAR(gp.mean(vec1(100.0)), 0.0, 1e-6);
  EXPECT_NEAR(gp.variance(vec1(100.0)), 1.0, 1e-6);
}

TEST(Gp, InterpolatesObservations) {
  // quasi-uniform design: spacing comparable to the lengthscale keeps the
  // Gram matrix well conditioned, which the 1e-8 tolerance presumes
  seqde::Rng rng(11);
  Dataset data(1);
  for (int i = 0; i < 14; ++i) {
    const double x = -2.0 + 4.0 * i / 13.0 + rng.uniform(-0.05, 0.05);
    data.add(vec1(x), smooth_target(vec1(x)));
  }
  const auto hp = seqde::make_hyperparams(1.0, vec1(0.35));
  const auto gp = GpPosterior::fit(data, hp, data.mean_value());
  for (int i = 0; i < data.size(); ++i) {
    const double yi = data.value(i);
    EXPECT_NEAR(gp.mean(data.point(i)), yi, 1e-8 * (1.0 + std::abs(yi)));
    EXPECT_LE(gp.variance(data.point(i)), 1e-8 * hp.signal_variance);
  }
}

TEST(Gp, MatchesDenseSolveOracle) {
  seqde::Rng rng(42);
  const int n = 15, m = 2;
  const auto data = random_smooth_dataset(n, m, rng);

  oracle::DenseGp ref;
  ref.X = data.points();
  ref.y = data.values();
  ref.sv = 1.7;
  ref.ls = Eigen::Vector2d(0.8, 1.3);
  ref.jitter = seqde::default_jitter(ref.sv);
  ref.prior_mean = 0.25;

  KernelHyperparams hp;
  hp.signal_variance = ref.sv;
  hp.lengthscales = ref.ls;
  hp.jitter = ref.jitter;
  const auto gp = GpPosterior::fit(data, hp, ref.prior_mean);

  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd theta(m);
    for (int d = 0; d < m; ++d) theta[d] = rng.uniform(-2.5, 2.5);
    EXPECT_NEAR(gp.mean(theta), ref.mean(theta), 1e-9);
    EXPECT_NEAR(gp.variance(theta), std::max(0.0, ref.variance(theta)), 1e-9);
  }
}

TEST(Gp, BatchPredictionMatchesPointwise) {
  seqde::Rng rng(7);
  const auto data = random_smooth_dataset(12, 2, rng);
  const auto hp = seqde::make_hyperparams(1.0, Eigen::Vector2d(0.7, 0.9));
  const auto gp = GpPosterior::fit(data, hp);
  Eigen::MatrixXd nodes(40, 2);
  for (int i = 0; i < nodes.rows(); ++i)
    for (int d = 0; d < 2; ++d) nodes(i, d) = rng.uniform(-2.0, 2.0);
  const auto pred = gp.predict(nodes);
  for (int i = 0; i < nodes.rows(); ++i) {
    const Eigen::VectorXd theta = nodes.row(i).transpose();
    EXPECT_NEAR(pred.mean[i], gp.mean(theta), 1e-12);
    EXPECT_NEAR(pred.variance[i], gp.variance(theta), 1e-12);
  }
}

TEST(Gp, AppendMatchesRefit) {
  seqde::Rng rng(3);
  const int n = 30, m = 3;
  const auto data = random_smooth_dataset(n, m, rng);
  const auto hp = seqde::make_hyperparams(1.2,
                                          Eigen::Vector3d(0.9, 1.1, 1.4));
  const auto gp = GpPosterior::fit(data, hp, data.mean_value());

  Eigen::VectorXd extra(m);
  extra << 0.37, -1.21, 0.66;
  const double extra_value = smooth_target(extra);
  const auto updated = gp.append(extra, extra_value);

  Dataset augmented = data;
  augmented.add(extra, extra_value);
  const auto refit = GpPosterior::fit(augmented, hp, gp.prior_mean());

  for (int t = 0; t < 30; ++t) {
    Eigen::VectorXd theta(m);
    for (int d = 0; d < m; ++d) theta[d] = rng.uniform(-2.0, 2.0);
    EXPECT_NEAR(updated.mean(theta), refit.mean(theta), 1e-10);
    EXPECT_NEAR(updated.variance(theta), refit.variance(theta), 1e-10);
  }
}

TEST(Gp, FactorReproducesKernelMatrix) {
  seqde::Rng rng(19);
  auto data = random_smooth_dataset(5, 2, rng);
  const auto hp = seqde::make_hyperparams(1.0, Eigen::Vector2d(0.8, 0.8));
  auto gp = GpPosterior::fit(data, hp);
  for (int extra = 0; extra < 20; ++extra) {
    Eigen::VectorXd theta(2);
    theta << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    if (gp.data().distance_to(theta) < 1e-3) continue;
    gp = gp.append(theta, smooth_target(theta));
  }
  const int n = gp.data().size();
  const Eigen::MatrixXd product = gp.chol_factor() * gp.chol_factor().transpose();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double want =
          i == j ? hp.signal_variance + hp.jitter
                 : seqde::kernel_value(hp, gp.data().point(i), gp.data().point(j));
      EXPECT_NEAR(product(i, j), want, 1e-10);
    }
}

TEST(Gp, RejectsDuplicates) {
  Dataset data(1);
  data.add(vec1(0.5), 1.0);
  EXPECT_THROW(data.add(vec1(0.5 + 1e-10), 2.0), seqde::DuplicatePoint);

  const auto gp = GpPosterior::fit(data, seqde::make_hyperparams(1.0, vec1(1.0)));
  EXPECT_THROW(gp.append(vec1(0.5), 1.0), seqde::DuplicatePoint);
  EXPECT_NO_THROW(gp.append(vec1(0.6), 1.0));
}

TEST(Gp, DimensionChecks) {
  Dataset data(2);
  EXPECT_THROW(data.add(vec1(0.0), 1.0), seqde::DimensionMismatch);
  data.add(Eigen::Vector2d(0.0, 0.0), 1.0);
  EXPECT_THROW(data.add(Eigen::Vector2d(1.0, 0.0),
                        std::numeric_limits<double>::quiet_NaN()),
               seqde::Error);
  const auto gp = GpPosterior::fit(data, seqde::make_hyperparams(1.0, Eigen::Vector2d(1.0, 1.0)));
  EXPECT_THROW(gp.mean(vec1(0.0)), seqde::DimensionMismatch);
}

TEST(Gp, PosteriorInvariantUnderDataPermutation) {
  seqde::Rng rng(23);
  const auto data = random_smooth_dataset(18, 2, rng);
  std::vector<int> order(18);
  for (int i = 0; i < 18; ++i) order[i] = i;
  std::mt19937 shuffler(5);
  std::shuffle(order.begin(), order.end(), shuffler);
  Dataset permuted(2);
  for (int i : order) permuted.add(data.point(i), data.value(i));

  const auto hp = seqde::make_hyperparams(1.0, Eigen::Vector2d(0.9, 0.7));
  const auto a = GpPosterior::fit(data, hp, 0.1);
  const auto b = GpPosterior::fit(permuted, hp, 0.1);
  for (int t = 0; t < 25; ++t) {
    Eigen::VectorXd theta(2);
    theta << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    EXPECT_NEAR(a.mean(theta), b.mean(theta), 1e-10);
    EXPECT_NEAR(a.variance(theta), b.variance(theta), 1e-10);
  }
}

TEST(Gp, VarianceNeverIncreasesUnderAppend) {
  seqde::Rng rng(31);
  const auto data = random_smooth_dataset(10, 2, rng);
  const auto hp = seqde::make_hyperparams(1.0, Eigen::Vector2d(0.8, 1.0));
  const auto gp = GpPosterior::fit(data, hp);

  Eigen::MatrixXd probes(50, 2);
  for (int i = 0; i < 50; ++i)
    for (int d = 0; d < 2; ++d) probes(i, d) = rng.uniform(-2.0, 2.0);
  const auto before = gp.predict(probes);

  Eigen::VectorXd extra = Eigen::Vector2d(0.15, -0.4);
  const auto updated = gp.append(extra, smooth_target(extra));
  const auto after = updated.predict(probes);
  for (int i = 0; i < 50; ++i)
    EXPECT_LE(after.variance[i], before.variance[i] + 1e-12);
  EXPECT_LE(updated.variance(extra), 1e-8 * hp.signal_variance);
}

TEST(Gp, CalibrationRecoversLengthscale) {
  // draw data from a known GP with lengthscale 0.5 and unit variance
  const int n = 40;
  seqde::Rng rng(77);
  Dataset data(1);
  Eigen::MatrixXd X(n, 1);
  {
    std::vector<double> xs;
    while (static_cast<int>(xs.size()) < n) {
      const double x = rng.uniform(-2.0, 2.0);
      bool ok = true;
      for (double v : xs)
        if (std::abs(v - x) < 1e-3) ok = false;
      if (ok) xs.push_back(x);
    }
    for (int i = 0; i < n; ++i) X(i, 0) = xs[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double z = (X(i, 0) - X(j, 0)) / 0.5;
      K(i, j) = std::exp(-0.5 * z * z);
    }
  K.diagonal().array() += 1e-10;
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(K).matrixL();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  const Eigen::VectorXd y = L * z;
  for (int i = 0; i < n; ++i) data.add(X.row(i).transpose(), y[i]);

  const auto hp = seqde::calibrate_hyperparams(data, 8, 123);
  EXPECT_GE(hp.lengthscales[0], 0.25);
  EXPECT_LE(hp.lengthscales[0], 1.0);
  EXPECT_EQ(hp.jitter, seqde::default_jitter(hp.signal_variance));
}

TEST(Gp, CalibrationConstantDataDrivesVarianceToLowerBound) {
  Dataset data(1);
  for (int i = 0; i < 8; ++i) data.add(vec1(0.3 * i), 2.5);
  const auto hp = seqde::calibrate_hyperparams(data, 4, 9);
  EXPECT_LE(hp.signal_variance, 1e-3 * 1.0001);
}

TEST(Gp, CalibrationIsDeterministic) {
  seqde::Rng rng(55);
  const auto data = random_smooth_dataset(12, 2, rng);
  const auto a = seqde::calibrate_hyperparams(data, 5, 2024);
  const auto b = seqde::calibrate_hyperparams(data, 5, 2024);
  EXPECT_EQ(a.signal_variance, b.signal_variance);
  EXPECT_EQ(a.lengthscales[0], b.lengthscales[0]);
  EXPECT_EQ(a.lengthscales[1], b.lengthscales[1]);
}

TEST(Gp, CalibrationNeedsThreePoints) {
  Dataset data(1);
  data.add(vec1(0.0), 1.0);
  data.add(vec1(1.0), 2.0);
  EXPECT_THROW(seqde::calibrate_hyperparams(data, 2, 1), seqde::Error);
}

TEST(Gp, DatasetCsvRoundTripIsExact) {
  seqde::Rng rng(99);
  const auto data = random_smooth_dataset(9, 3, rng);
  const std::string path = "test_gp_dataset.csv";
  data.save_csv(path);
  const auto loaded = Dataset::load_csv(path);
  ASSERT_EQ(loaded.size(), data.size());
  ASSERT_EQ(loaded.dimension(), data.dimension());
  for (int i = 0; i < data.size(); ++i) {
    EXPECT_EQ(loaded.value(i), data.value(i));
    for (int d = 0; d < 3; ++d)
      EXPECT_EQ(loaded.point(i)[d], data.point(i)[d]);
  }
  std::remove(path.c_str());
}

TEST(Gp, PriorMeanDefaultsToDataMean) {
  Dataset data(1);
  data.add(vec1(0.0), 2.0);
  data.add(vec1(5.0), 4.0);
  const auto gp = GpPosterior::fit(data, seqde::make_hyperparams(1.0, vec1(0.5)));
  EXPECT_DOUBLE_EQ(gp.prior_mean(), 3.0);
  EXPECT_NEAR(gp.mean(vec1(100.0)), 3.0, 1e-9);
}
