// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_DENSITY_HPP
#define SEQDE_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "seqde/csv.hpp"
#include "seqde/errors.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"

namespace seqde {

// Binned probability density with its cumulative distribution. pdf is
// normalized so that sum(pdf_b * width_b) equals 1; support_floor is the
// log-clipping threshold used when comparing estimates on a log scale.
struct DensityEstimate {
  Eigen::VectorXd edges; // B+1 ascending
  Eigen::VectorXd pdf;   // B, nonnegative
  Eigen::VectorXd cdf;   // B+1, cdf[0]=0, nondecreasing
  double support_floor = 0.0;

  int bins() const { return static_cast<int>(pdf.size()); }
  double width(int b) const { return edges[b + 1] - edges[b]; }

  double total_mass() const {
    double s = 0.0;
    for (int b = 0; b < bins(); ++b) s += pdf[b] * width(b);
    return s;
  }

  // bins with pdf above the support floor
  bool supported(int b) const { return pdf[b] > support_floor; }

  void save_csv(const std::string& path) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(bins()));
    for (int b = 0; b < bins(); ++b)
      rows.push_back({edges[b], edges[b + 1], pdf[b], cdf[b + 1]});
    csv::write_table(path, {"s_left", "s_right", "pdf", "cdf_right"}, rows);
  }

  static DensityEstimate load_csv(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const std::vector<std::string> want = {"s_left", "s_right", "pdf",
                                           "cdf_right"};
    if (t.header != want)
      throw MalformedTable("'" + path +
                           "' must have s_left,s_right,pdf,cdf_right columns");
    const int B = static_cast<int>(t.rows.size());
    if (B < 1) throw MalformedTable("'" + path + "' has no bins");
    DensityEstimate d;
    d.edges.resize(B + 1);
    d.pdf.resize(B);
    d.cdf.resize(B + 1);
    d.cdf[0] = 0.0;
    for (int b = 0; b < B; ++b) {
      d.edges[b] = t.rows[b][0];
      if (b > 0 && t.rows[b][0] != t.rows[b - 1][1])
        throw MalformedTable("'" + path + "' bins are not contiguous");
      d.pdf[b] = t.rows[b][2];
      d.cdf[b + 1] = t.rows[b][3];
    }
    d.edges[B] = t.rows[B - 1][1];
    d.support_floor = 1e-12 * d.pdf.maxCoeff();
    return d;
  }
};

namespace detail {

inline DensityEstimate point_mass(double value) {
  const double half = 1e-9 * std::max(1.0, std::abs(value));
  DensityEstimate d;
  d.edges.resize(2);
  d.edges << value - half, value + half;
  d.pdf.resize(1);
  d.pdf[0] = 1.0 / (2.0 * half);
  d.cdf.resize(2);
  d.cdf << 0.0, 1.0;
  d.support_floor = 1e-12 * d.pdf[0];
  return d;
}

} // namespace detail

// Weighted histogram of `values` on the given uniform edges, normalized by
// the total weight. Values outside the edge range are clamped into the end
// bins so no mass is lost.
inline DensityEstimate histogram(const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& weights,
                                 const Eigen::VectorXd& edges) {
  if (values.size() != weights.size())
    throw DimensionMismatch("values and weights differ in length");
  if (edges.size() < 2) throw Error("need at least two bin edges");
  const int B = static_cast<int>(edges.size()) - 1;
  const double lo = edges[0];
  const double hi = edges[B];
  const double width = (hi - lo) / B;
  if (!(width > 0.0)) throw Error("bin edges must be increasing");

  DensityEstimate d;
  d.edges = edges;
  d.pdf = Eigen::VectorXd::Zero(B);
  const long N = values.size();
  double total = 0.0;
  for (long i = 0; i < N; ++i) total += weights[i];
  if (!(total > 0.0)) throw Error("total weight must be positive");
  for (long i = 0; i < N; ++i) {
    int b = static_cast<int>((values[i] - lo) / width);
    if (b < 0) b = 0;
    if (b >= B) b = B - 1;
    d.pdf[b] += weights[i];
  }
  d.cdf.resize(B + 1);
  d.cdf[0] = 0.0;
  for (int b = 0; b < B; ++b) {
    d.pdf[b] /= width * total;
    d.cdf[b + 1] = d.cdf[b] + d.pdf[b] * width;
  }
  d.support_floor = 1e-12 * d.pdf.maxCoeff();
  return d;
}

// Uniform edges spanning [min, max] of the values, padded by 1% of the
// extent on each side.
inline Eigen::VectorXd auto_edges(double lo, double hi, int bins) {
  const double pad = 0.01 * (hi - lo);
  Eigen::VectorXd edges(bins + 1);
  edges.setLinSpaced(bins + 1, lo - pad, hi + pad);
  return edges;
}

// Pushforward density of map values observed at weighted quadrature nodes.
// A value range below 1e-14 collapses to a single-bin point mass.
inline DensityEstimate pushforward(const Eigen::VectorXd& values,
                                   const Eigen::VectorXd& weights, int bins) {
  if (bins < 1) throw Error("bins must be >= 1");
  if (values.size() == 0) throw Error("cannot bin zero values");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error("map values contain a non-finite entry");
  if (hi - lo < 1e-14) return detail::point_mass(0.5 * (lo + hi));
  return histogram(values, weights, auto_edges(lo, hi, bins));
}

inline DensityEstimate pushforward(const Eigen::VectorXd& values,
                                   const QuadratureGrid& grid, int bins) {
  if (values.size() != grid.size())
    throw DimensionMismatch("one map value per quadrature node required");
  return pushforward(values, grid.weights, bins);
}

struct BoundPdfs {
  DensityEstimate plus;  // pushforward of mean + alpha*sigma
  DensityEstimate minus; // pushforward of mean - alpha*sigma
};

// Upper/lower confidence-bound pushforwards binned on one shared edge set
// spanning both value ranges; sharing edges makes the cdf ordering
// F_plus <= F <= F_minus exact, not approximate.
inline BoundPdfs bound_pdfs_from_fields(const Eigen::VectorXd& plus_values,
                                        const Eigen::VectorXd& minus_values,
                                        const Eigen::VectorXd& weights,
                                        int bins) {
  const double lo = std::min(plus_values.minCoeff(), minus_values.minCoeff());
  const double hi = std::max(plus_values.maxCoeff(), minus_values.maxCoeff());
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error("bound values contain a non-finite entry");
  BoundPdfs out;
  if (hi - lo < 1e-14) {
    out.plus = detail::point_mass(0.5 * (lo + hi));
    out.minus = out.plus;
    return out;
  }
  const Eigen::VectorXd edges = auto_edges(lo, hi, bins);
  out.plus = histogram(plus_values, weights, edges);
  out.minus = histogram(minus_values, weights, edges);
  return out;
}

inline BoundPdfs bound_pdfs(const GpPosterior& gp, const QuadratureGrid& grid,
                            double alpha, int bins) {
  if (!(alpha >= 0.0)) throw Error("alpha must be nonnegative");
  const GridPrediction pred = gp.predict(grid.nodes);
  const Eigen::VectorXd sigma = pred.variance.cwiseSqrt();
  return bound_pdfs_from_fields(pred.mean + alpha * sigma,
                                pred.mean - alpha * sigma, grid.weights, bins);
}

namespace detail {

inline void require_shared_edges(const DensityEstimate& f,
                                 const DensityEstimate& g) {
  if (f.edges.size() != g.edges.size())
    throw DimensionMismatch("density estimates have different bin counts");
  for (long i = 0; i < f.edges.size(); ++i)
    if (f.edges[i] != g.edges[i])
      throw DimensionMismatch("density estimates do not share bin edges");
}

} // namespace detail

// (1/2) * integral of |log f - log g| over the bins where both pdfs exceed
// their support floors. Throws NoOverlap when no bin qualifies.
inline double log_l1_distance(const DensityEstimate& f,
                              const DensityEstimate& g) {
  detail::require_shared_edges(f, g);
  double acc = 0.0;
  bool any = false;
  for (int b = 0; b < f.bins(); ++b) {
    if (!f.supported(b) || !g.supported(b)) continue;
    any = true;
    acc += std::abs(std::log(f.pdf[b]) - std::log(g.pdf[b])) * f.width(b);
  }
  if (!any)
    throw NoOverlap("density estimates share no bins above the support floor");
  return 0.5 * acc;
}

// (1/2) * integral of |f - g|^2 over all shared bins.
inline double l2_distance(const DensityEstimate& f, const DensityEstimate& g) {
  detail::require_shared_edges(f, g);
  double acc = 0.0;
  for (int b = 0; b < f.bins(); ++b) {
    const double diff = f.pdf[b] - g.pdf[b];
    acc += diff * diff * f.width(b);
  }
  return 0.5 * acc;
}

} // namespace seqde

#endif // SEQDE_DENSITY_HPP
