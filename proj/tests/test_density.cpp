// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "seqde/density.hpp"
#include "seqde/rng.hpp"

using seqde::DensityEstimate;
using seqde::InputDistribution;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

double chi2_1_pdf(double s) {
  return std::exp(-0.5 * s) / std::sqrt(2.0 * M_PI * s);
}

seqde::QuadratureGrid standard_normal_grid(int res) {
  const auto dist = InputDistribution::gaussian_diagonal(vec1(1.0));
  return seqde::quadrature_grid(dist, {res});
}

} // namespace

TEST(Density, IdentityMapRecoversStandardNormal) {
  const auto grid = standard_normal_grid(4000);
  const DensityEstimate d = seqde::pushforward(grid.nodes.col(0), grid, 100);

  EXPECT_NEAR(d.total_mass(), d.cdf[d.bins()], 1e-12);
  EXPECT_NEAR(d.cdf[d.bins()], 1.0, 1e-12);
  for (int b = 1; b <= d.bins(); ++b) EXPECT_GE(d.cdf[b], d.cdf[b - 1]);

  int b0 = 0;
  while (!(d.edges[b0] <= 0.0 && 0.0 < d.edges[b0 + 1])) ++b0;
  EXPECT_NEAR(d.pdf[b0], 0.3989, 0.01);
}

TEST(Density, ConstantMapGivesPointMass) {
  const auto grid = standard_normal_grid(50);
  const Eigen::VectorXd values = Eigen::VectorXd::Constant(grid.size(), 2.5);
  const DensityEstimate d = seqde::pushforward(values, grid, 64);
  ASSERT_EQ(d.bins(), 1);
  EXPECT_NEAR(d.cdf[1], 1.0, 1e-12);
  EXPECT_GE(d.pdf[0], 1e8); // concentrated on a 2e-9-wide bin
  EXPECT_LE(d.edges[0], 2.5);
  EXPECT_GE(d.edges[1], 2.5);
}

TEST(Density, SquareMapMatchesChiSquared) {
  const auto grid = standard_normal_grid(6000);
  const Eigen::VectorXd values = grid.nodes.col(0).array().square();
  const DensityEstimate d = seqde::pushforward(values, grid, 100);
  for (int b = 0; b < d.bins(); ++b) {
    const double c = 0.5 * (d.edges[b] + d.edges[b + 1]);
    if (c < 0.1 || c > 4.0) continue;
    EXPECT_NEAR(d.pdf[b] / chi2_1_pdf(c), 1.0, 0.05) << "at s=" << c;
  }
}

TEST(Density, BoundCdfsBracketMeanCdf) {
  seqde::Rng rng(17);
  seqde::Dataset data(1);
  for (int i = 0; i < 8; ++i) {
    const double x = -3.5 + 7.0 * i / 7.0 + rng.uniform(-0.1, 0.1);
    data.add(vec1(x), std::sin(1.3 * x) + 0.2 * x * x);
  }
  const auto gp = seqde::GpPosterior::fit(
      data, seqde::make_hyperparams(1.0, vec1(0.9)));
  const auto grid = standard_normal_grid(400);

  const auto bounds = seqde::bound_pdfs(gp, grid, 1.96, 80);
  const auto pred = gp.predict(grid.nodes);
  const DensityEstimate mean_pdf =
      seqde::histogram(pred.mean, grid.weights, bounds.plus.edges);

  for (int i = 0; i <= 80; ++i) {
    EXPECT_LE(bounds.plus.cdf[i], mean_pdf.cdf[i] + 1e-12);
    EXPECT_LE(mean_pdf.cdf[i], bounds.minus.cdf[i] + 1e-12);
  }
}

TEST(Density, CdfGapShrinksAfterAppend) {
  seqde::Rng rng(29);
  seqde::Dataset data(1);
  for (int i = 0; i < 6; ++i) {
    const double x = -3.0 + 6.0 * i / 5.0;
    data.add(vec1(x), std::cos(x));
  }
  const auto gp = seqde::GpPosterior::fit(
      data, seqde::make_hyperparams(1.0, vec1(1.0)));
  const auto grid = standard_normal_grid(300);
  const auto pred = gp.predict(grid.nodes);
  const Eigen::VectorXd sigma = pred.variance.cwiseSqrt();

  const auto before = seqde::bound_pdfs_from_fields(
      pred.mean + 1.96 * sigma, pred.mean - 1.96 * sigma, grid.weights, 60);

  const auto updated = gp.append(vec1(0.4), gp.mean(vec1(0.4)));
  const auto pred2 = updated.predict(grid.nodes);
  const Eigen::VectorXd sigma2 = pred2.variance.cwiseSqrt();
  // same edges so the gaps are comparable edge by edge
  const auto plus2 = seqde::histogram(pred2.mean + 1.96 * sigma2, grid.weights,
                                      before.plus.edges);
  const auto minus2 = seqde::histogram(pred2.mean - 1.96 * sigma2,
                                       grid.weights, before.plus.edges);

  double gap_before = 0.0, gap_after = 0.0;
  for (long i = 0; i < before.plus.cdf.size(); ++i) {
    gap_before = std::max(gap_before, before.minus.cdf[i] - before.plus.cdf[i]);
    gap_after = std::max(gap_after, minus2.cdf[i] - plus2.cdf[i]);
  }
  EXPECT_LE(gap_after, gap_before + 1e-10);
}

TEST(Density, LogDistanceOfScaledPdf) {
  const auto grid = standard_normal_grid(2000);
  const DensityEstimate f = seqde::pushforward(grid.nodes.col(0), grid, 50);

  const double c = 3.7;
  DensityEstimate g = f; // unnormalized probe: same support, scaled by c
  g.pdf *= c;
  g.support_floor *= c;

  double support_length = 0.0;
  for (int b = 0; b < f.bins(); ++b)
    if (f.supported(b)) support_length += f.width(b);

  EXPECT_NEAR(seqde::log_l1_distance(f, g), 0.5 * std::log(c) * support_length,
              1e-12);
  EXPECT_NEAR(seqde::log_l1_distance(f, f), 0.0, 1e-15);
}

TEST(Density, HandComputedDistances) {
  DensityEstimate f, g;
  f.edges.resize(4);
  f.edges << 0.0, 1.0, 2.0, 3.0;
  f.pdf.resize(3);
  f.pdf << 0.2, 0.5, 0.3;
  f.cdf.resize(4);
  f.cdf << 0.0, 0.2, 0.7, 1.0;
  f.support_floor = 1e-12 * 0.5;
  g = f;
  g.pdf << 0.4, 0.25, 0.35;
  g.cdf << 0.0, 0.4, 0.65, 1.0;

  const double want_log = 0.5 * (std::abs(std::log(0.2 / 0.4)) +
                                 std::abs(std::log(0.5 / 0.25)) +
                                 std::abs(std::log(0.3 / 0.35)));
  EXPECT_NEAR(seqde::log_l1_distance(f, g), want_log, 1e-14);

  const double want_l2 =
      0.5 * (0.2 * 0.2 + 0.25 * 0.25 + 0.05 * 0.05);
  EXPECT_NEAR(seqde::l2_distance(f, g), want_l2, 1e-14);
}

TEST(Density, DisjointSupportsThrowNoOverlap) {
  DensityEstimate f, g;
  f.edges.setLinSpaced(11, 0.0, 10.0);
  f.pdf = Eigen::VectorXd::Zero(10);
  f.pdf[0] = 1.0;
  f.cdf.setZero(11);
  f.support_floor = 1e-12;
  g = f;
  g.pdf.setZero();
  g.pdf[9] = 1.0;
  EXPECT_THROW(seqde::log_l1_distance(f, g), seqde::NoOverlap);
}

TEST(Density, MismatchedEdgesRejected) {
  const auto grid = standard_normal_grid(200);
  const DensityEstimate f = seqde::pushforward(grid.nodes.col(0), grid, 50);
  const DensityEstimate g = seqde::pushforward(grid.nodes.col(0), grid, 40);
  EXPECT_THROW(seqde::log_l1_distance(f, g), seqde::DimensionMismatch);
  EXPECT_THROW(seqde::l2_distance(f, g), seqde::DimensionMismatch);
}

TEST(Density, QuadratureRefinementIsStable) {
  const auto coarse = standard_normal_grid(2000);
  const auto fine = standard_normal_grid(4000);
  const auto map = [](const Eigen::VectorXd& nodes) {
    return (nodes.array().cube() + nodes.array()).matrix().eval();
  };
  // identical value ranges, so identical auto edges
  const DensityEstimate a = seqde::pushforward(map(coarse.nodes.col(0)), coarse, 60);
  const DensityEstimate b = seqde::pushforward(map(fine.nodes.col(0)), fine, 60);
  for (int bn = 0; bn < a.bins(); ++bn) {
    if (!a.supported(bn) || !b.supported(bn)) continue;
    EXPECT_NEAR(a.pdf[bn] / b.pdf[bn], 1.0, 0.05);
  }
}

TEST(Density, CsvRoundTripIsExact) {
  const auto grid = standard_normal_grid(500);
  const DensityEstimate d = seqde::pushforward(grid.nodes.col(0), grid, 30);
  const std::string path = "test_density_roundtrip.csv";
  d.save_csv(path);
  const DensityEstimate loaded = DensityEstimate::load_csv(path);
  ASSERT_EQ(loaded.bins(), d.bins());
  for (int b = 0; b < d.bins(); ++b) {
    EXPECT_EQ(loaded.pdf[b], d.pdf[b]);
    EXPECT_EQ(loaded.edges[b], d.edges[b]);
    EXPECT_EQ(loaded.cdf[b + 1], d.cdf[b + 1]);
  }
  std::remove(path.c_str());
}
