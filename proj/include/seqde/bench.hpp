// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation harness: dense-grid reference pdfs, Latin-hypercube baselines,
// the rebinned log-L1 error metric, pdf uncertainty bands from posterior
// draws, and tabulated maps loaded from tensor-grid CSV files.

#ifndef SEQDE_BENCH_HPP
#define SEQDE_BENCH_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seqde/csv.hpp"
#include "seqde/density.hpp"
#include "seqde/errors.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"
#include "seqde/interp.hpp"
#include "seqde/parallel.hpp"
#include "seqde/rng.hpp"

namespace seqde {

using MapFunction = std::function<double(const Eigen::VectorXd&)>;

// Evaluates a map at every node of a quadrature grid in parallel. Exceptions
// and non-finite results surface as MapEvaluationFailure.
inline Eigen::VectorXd evaluate_map(const MapFunction& map,
                                    const QuadratureGrid& grid) {
  Eigen::VectorXd values(grid.size());
  parallel::parallel_for(
      static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
        const long row = static_cast<long>(i);
        double v;
        try {
          v = map(grid.nodes.row(row).transpose());
        } catch (const std::exception& e) {
          throw MapEvaluationFailure("map failed at node " +
                                     std::to_string(row) + ": " + e.what());
        }
        if (!std::isfinite(v))
          throw MapEvaluationFailure("map returned a non-finite value at node " +
                                     std::to_string(row));
        values[row] = v;
      });
  return values;
}

// Pushforward pdf of the true map sampled on a dense tensor grid.
inline DensityEstimate exact_pdf_oracle(const MapFunction& map,
                                        const InputDistribution& input,
                                        const std::vector<int>& resolution,
                                        int bins) {
  const QuadratureGrid grid = quadrature_grid(input, resolution);
  return pushforward(evaluate_map(map, grid), grid, bins);
}

// Mass-conserving rebinning onto a target edge set: each source bin spreads
// its mass over the target bins it overlaps; mass outside the target range
// is clamped into the end bins so none is lost.
inline DensityEstimate rebin(const DensityEstimate& src,
                             const Eigen::VectorXd& edges) {
  const int B = static_cast<int>(edges.size()) - 1;
  if (B < 1) throw Error("rebinning needs at least one target bin");
  if (edges.size() == src.edges.size() && edges == src.edges) return src;
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(B);
  for (int j = 0; j < src.bins(); ++j) {
    const double m = src.pdf[j] * src.width(j);
    if (m == 0.0) continue;
    const double lo = src.edges[j];
    const double hi = src.edges[j + 1];
    for (int b = 0; b < B; ++b) {
      const double a = b == 0 ? -std::numeric_limits<double>::infinity()
                              : edges[b];
      const double c = b + 1 == B ? std::numeric_limits<double>::infinity()
                                  : edges[b + 1];
      const double overlap = std::min(hi, c) - std::max(lo, a);
      if (overlap > 0.0) mass[b] += m * std::min(1.0, overlap / (hi - lo));
    }
  }
  DensityEstimate out;
  out.edges = edges;
  out.pdf.resize(B);
  out.cdf.resize(B + 1);
  out.cdf[0] = 0.0;
  for (int b = 0; b < B; ++b) {
    out.pdf[b] = mass[b] / (edges[b + 1] - edges[b]);
    out.cdf[b + 1] = out.cdf[b] + mass[b];
  }
  out.support_floor = 1e-12 * out.pdf.maxCoeff();
  return out;
}

// L1 distance between the log pdfs after rebinning the estimate onto the
// reference edges, integrated over the bins both support. Unlike the
// criterion's half-distance between its own two bounds, this is the full
// integral of |log estimate - log reference|.
inline double log_l1_error(const DensityEstimate& estimate,
                           const DensityEstimate& reference) {
  const DensityEstimate re = rebin(estimate, reference.edges);
  double acc = 0.0;
  bool any = false;
  for (int b = 0; b < reference.bins(); ++b) {
    if (!re.supported(b) || !reference.supported(b)) continue;
    any = true;
    acc += std::abs(std::log(re.pdf[b]) - std::log(reference.pdf[b])) *
           reference.width(b);
  }
  if (!any)
    throw NoOverlap("estimate and reference share no supported bins");
  return acc;
}

struct LhBaselineEntry {
  int size = 0;
  std::vector<double> errors; // one per repeat
  double mean = 0.0;
  double sd = 0.0; // sample standard deviation, 0 for a single repeat
};

// For each design size, fits a GP to `repeats` fresh Latin-hypercube designs
// of the true map, pushes the posterior mean forward, and scores it against
// the reference pdf.
inline std::vector<LhBaselineEntry> lh_baseline(
    const MapFunction& map, const InputDistribution& input,
    const QuadratureGrid& grid, const DensityEstimate& reference,
    const std::vector<int>& sizes, int repeats, std::uint64_t seed,
    int bins, int calibration_restarts = 6) {
  if (repeats < 1) throw ConfigError("lh_baseline needs repeats >= 1");
  if (sizes.empty()) throw ConfigError("lh_baseline needs at least one size");
  std::vector<LhBaselineEntry> out;
  out.reserve(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    LhBaselineEntry entry;
    entry.size = n;
    entry.errors.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
      const std::uint64_t run_seed =
          mix_seed(mix_seed(seed, static_cast<std::uint64_t>(n)),
                        static_cast<std::uint64_t>(r));
      const Eigen::MatrixXd design =
          latin_hypercube(n, input.bounds(), run_seed);
      Dataset data(input.dimension());
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd theta = design.row(i).transpose();
        double y;
        try {
          y = map(theta);
        } catch (const std::exception& e) {
          throw MapEvaluationFailure("map failed on a design point: " +
                                     std::string(e.what()));
        }
        data.add(theta, y);
      }
      const KernelHyperparams hp = calibrate_hyperparams(
          data, calibration_restarts, mix_seed(run_seed, 1));
      const GpPosterior gp = GpPosterior::fit(data, hp);
      const GridPrediction pred = gp.predict(grid.nodes);
      const DensityEstimate est = pushforward(pred.mean, grid, bins);
      entry.errors.push_back(log_l1_error(est, reference));
    }
    double sum = 0.0;
    for (double e : entry.errors) sum += e;
    entry.mean = sum / repeats;
    if (repeats > 1) {
      double ss = 0.0;
      for (double e : entry.errors) ss += (e - entry.mean) * (e - entry.mean);
      entry.sd = std::sqrt(ss / (repeats - 1));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

struct UncertaintyBand {
  DensityEstimate center;  // pushforward of the posterior mean
  Eigen::VectorXd lower;   // per-bin envelope minima over realizations
  Eigen::VectorXd upper;   // per-bin envelope maxima
};

// Draws joint posterior realizations on the quadrature nodes from the
// factored node covariance and bins each on the edges of the mean
// pushforward. Envelopes start at the mean pdf, so they always contain it.
// When every node variance sits at the jitter floor the posterior is
// numerically deterministic and sampling would only bin regularization
// noise, so the band collapses onto the mean pdf.
inline UncertaintyBand uncertainty_band(const GpPosterior& gp,
                                        const QuadratureGrid& grid,
                                        int realizations, int bins,
                                        std::uint64_t seed) {
  if (realizations < 2)
    throw ConfigError("uncertainty band needs at least 2 realizations");
  const GridPrediction pred = gp.predict(grid.nodes);
  UncertaintyBand band;
  band.center = pushforward(pred.mean, grid, bins);
  band.lower = band.center.pdf;
  band.upper = band.center.pdf;

  const double jitter = gp.hyperparams().jitter;
  if (pred.variance.maxCoeff() <= 10.0 * jitter) return band;

  const long N = grid.size();
  const Eigen::MatrixXd& nodes = grid.nodes;
  const KernelHyperparams& hp = gp.hyperparams();
  Eigen::MatrixXd cov(N, N);
  parallel::parallel_for(static_cast<std::size_t>(N), [&](std::size_t jj) {
    const long j = static_cast<long>(jj);
    for (long i = 0; i < N; ++i)
      cov(i, j) = kernel_value(hp, nodes.row(i).transpose(),
                               nodes.row(j).transpose());
  });
  cov.noalias() -= pred.solved.transpose() * pred.solved;
  cov.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw FactorizationFailure(
        "node covariance is not positive definite; increase jitter");
  const Eigen::MatrixXd L = llt.matrixL();

  Rng gen(seed);
  Eigen::VectorXd z(N);
  for (int r = 0; r < realizations; ++r) {
    for (long i = 0; i < N; ++i) z[i] = gen.normal();
    const Eigen::VectorXd field = pred.mean + L * z;
    const DensityEstimate d =
        histogram(field, grid.weights, band.center.edges);
    band.lower = band.lower.cwiseMin(d.pdf);
    band.upper = band.upper.cwiseMax(d.pdf);
  }
  return band;
}

// Map defined by interpolation of a full tensor grid of samples; queries
// clamp to the table hull.
struct TabulatedMap {
  csv::TensorTable table;
  Interpolation method = Interpolation::Multilinear;

  int dimension() const { return table.dimension(); }

  Box bounds() const {
    Box box;
    const int m = table.dimension();
    box.lower.resize(m);
    box.upper.resize(m);
    for (int d = 0; d < m; ++d) {
      box.lower[d] = table.axes[d][0];
      box.upper[d] = table.axes[d][table.axes[d].size() - 1];
    }
    return box;
  }

  double operator()(const Eigen::VectorXd& theta) const {
    return tensor_interpolate(table, theta, method);
  }
};

inline TabulatedMap make_tabulated_map(csv::TensorTable table,
                                       Interpolation method) {
  for (long i = 0; i < table.values.size(); ++i)
    if (!std::isfinite(table.values[i]))
      throw MalformedTable("table value " + std::to_string(i) +
                           " is not finite");
  TabulatedMap map;
  map.table = std::move(table);
  map.method = method;
  return map;
}

inline TabulatedMap load_tabulated_map(const std::string& path,
                                       Interpolation method) {
  return make_tabulated_map(csv::read_tensor_grid(path), method);
}

} // namespace seqde

#endif // SEQDE_BENCH_HPP
