// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_INPUT_HPP
#define SEQDE_INPUT_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "seqde/csv.hpp"
#include "seqde/errors.hpp"
#include "seqde/interp.hpp"
#include "seqde/rng.hpp"

namespace seqde {

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  double extent(int d) const { return upper[d] - lower[d]; }

  bool contains(const Eigen::VectorXd& theta) const {
    for (long d = 0; d < lower.size(); ++d)
      if (theta[d] < lower[d] || theta[d] > upper[d]) return false;
    return true;
  }

  void validate() const {
    if (lower.size() != upper.size() || lower.size() == 0)
      throw DimensionMismatch("box bounds must be non-empty and congruent");
    for (long d = 0; d < lower.size(); ++d) {
      if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]))
        throw Error("box bounds must be finite");
      if (!(upper[d] > lower[d]))
        throw Error("box upper bound must exceed lower bound in dimension " +
                    std::to_string(d + 1));
    }
  }
};

inline double standard_normal_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

// Probability density of the uncertain input over a bounding box. Either a
// diagonal Gaussian truncated to the box, or a density tabulated on a
// tensor grid (renormalized, evaluated by multilinear interpolation).
class InputDistribution {
public:
  enum class Kind { GaussianDiagonal, EmpiricalGrid };

  static InputDistribution gaussian_diagonal(const Eigen::VectorXd& variances) {
    Box box;
    box.lower.resize(variances.size());
    box.upper.resize(variances.size());
    for (long d = 0; d < variances.size(); ++d) {
      check_variance(variances[d]);
      const double half = 4.0 * std::sqrt(variances[d]);
      box.lower[d] = -half;
      box.upper[d] = half;
    }
    return gaussian_diagonal(variances, box);
  }

  static InputDistribution gaussian_diagonal(const Eigen::VectorXd& variances,
                                             Box bounds) {
    bounds.validate();
    if (bounds.dimension() != variances.size())
      throw DimensionMismatch("bounds dimension does not match variances");
    for (long d = 0; d < variances.size(); ++d) check_variance(variances[d]);
    InputDistribution dist;
    dist.kind_ = Kind::GaussianDiagonal;
    dist.bounds_ = std::move(bounds);
    dist.variances_ = variances;
    dist.mass_ = 1.0;
    for (long d = 0; d < variances.size(); ++d) {
      const double sd = std::sqrt(variances[d]);
      dist.mass_ *= standard_normal_cdf(dist.bounds_.upper[d] / sd) -
                    standard_normal_cdf(dist.bounds_.lower[d] / sd);
    }
    if (dist.mass_ < 0.95)
      throw Error("bounds capture only " + std::to_string(dist.mass_) +
                  " of the Gaussian mass; need at least 0.95");
    return dist;
  }

  static InputDistribution empirical_grid(csv::TensorTable table) {
    const int m = table.dimension();
    if (m < 1) throw MalformedTable("empirical grid needs at least 1 axis");
    for (long i = 0; i < table.values.size(); ++i)
      if (table.values[i] < 0.0)
        throw Error("empirical density has a negative value");

    // trapezoid-rule tensor integral, then renormalize to integrate to 1
    double integral = 0.0;
    {
      std::vector<std::size_t> stride(static_cast<std::size_t>(m), 1);
      for (int d = m - 2; d >= 0; --d)
        stride[static_cast<std::size_t>(d)] =
            stride[static_cast<std::size_t>(d) + 1] *
            static_cast<std::size_t>(table.axes[static_cast<std::size_t>(d) + 1].size());
      const std::size_t n = table.size();
      for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        for (int d = 0; d < m; ++d) {
          const Eigen::VectorXd& axis = table.axes[static_cast<std::size_t>(d)];
          const long idx = static_cast<long>(
              (i / stride[static_cast<std::size_t>(d)]) %
              static_cast<std::size_t>(axis.size()));
          double wd;
          if (idx == 0)
            wd = 0.5 * (axis[1] - axis[0]);
          else if (idx == axis.size() - 1)
            wd = 0.5 * (axis[idx] - axis[idx - 1]);
          else
            wd = 0.5 * (axis[idx + 1] - axis[idx - 1]);
          w *= wd;
        }
        integral += w * table.values[static_cast<long>(i)];
      }
    }
    if (!(integral > 0.0))
      throw Error("empirical density integrates to zero");
    table.values /= integral;

    InputDistribution dist;
    dist.kind_ = Kind::EmpiricalGrid;
    dist.table_ = std::move(table);
    dist.bounds_.lower.resize(m);
    dist.bounds_.upper.resize(m);
    for (int d = 0; d < m; ++d) {
      const auto& axis = dist.table_.axes[static_cast<std::size_t>(d)];
      dist.bounds_.lower[d] = axis[0];
      dist.bounds_.upper[d] = axis[axis.size() - 1];
    }
    dist.bounds_.validate();
    dist.mass_ = 1.0;
    return dist;
  }

  static InputDistribution empirical_grid_csv(const std::string& path) {
    return empirical_grid(csv::read_tensor_grid(path));
  }

  double density(const Eigen::VectorXd& theta) const {
    if (theta.size() != bounds_.dimension())
      throw DimensionMismatch("density query has wrong dimension");
    if (!bounds_.contains(theta)) return 0.0;
    if (kind_ == Kind::GaussianDiagonal) {
      double p = 1.0;
      for (long d = 0; d < variances_.size(); ++d) {
        const double lambda = variances_[d];
        p *= std::exp(-0.5 * theta[d] * theta[d] / lambda) /
             std::sqrt(2.0 * 3.14159265358979323846 * lambda);
      }
      return p;
    }
    const double v = tensor_interpolate(table_, theta, Interpolation::Multilinear);
    return v > 0.0 ? v : 0.0;
  }

  const Box& bounds() const { return bounds_; }
  int dimension() const { return bounds_.dimension(); }
  Kind kind() const { return kind_; }

  // Gaussian probability captured by the box (1 for empirical grids).
  double truncated_mass() const { return mass_; }

  // Gaussian variances; only meaningful for GaussianDiagonal.
  const Eigen::VectorXd& variances() const { return variances_; }

private:
  InputDistribution() = default;

  static void check_variance(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error("variances must be positive and finite");
  }

  Kind kind_ = Kind::GaussianDiagonal;
  Box bounds_;
  Eigen::VectorXd variances_;
  csv::TensorTable table_;
  double mass_ = 1.0;
};

// Midpoint-rule tensor grid over the distribution's box. weights[i] is
// density(node_i) times the cell volume, so sums over nodes approximate
// integrals against the input density.
struct QuadratureGrid {
  Eigen::MatrixXd nodes;   // N x m, row-major node order, last dim fastest
  Eigen::VectorXd weights; // N
  std::vector<int> resolution;

  long size() const { return nodes.rows(); }
  int dimension() const { return static_cast<int>(nodes.cols()); }
  double total_mass() const { return weights.sum(); }
};

inline QuadratureGrid quadrature_grid(const InputDistribution& dist,
                                      const std::vector<int>& resolution,
                                      std::size_t node_cap = 2'000'000) {
  const int m = dist.dimension();
  if (static_cast<int>(resolution.size()) != m)
    throw DimensionMismatch("resolution has " +
                            std::to_string(resolution.size()) +
                            " entries for a " + std::to_string(m) +
                            "-dimensional input");
  std::size_t total = 1;
  for (int r : resolution) {
    if (r < 1) throw Error("resolution entries must be >= 1");
    if (total > node_cap / static_cast<std::size_t>(r))
      throw ResolutionTooLarge("tensor grid exceeds the node cap of " +
                               std::to_string(node_cap));
    total *= static_cast<std::size_t>(r);
  }
  if (total > node_cap)
    throw ResolutionTooLarge("tensor grid exceeds the node cap of " +
                             std::to_string(node_cap));

  const Box& box = dist.bounds();
  double cell_volume = 1.0;
  for (int d = 0; d < m; ++d) cell_volume *= box.extent(d) / resolution[d];

  QuadratureGrid grid;
  grid.resolution = resolution;
  grid.nodes.resize(static_cast<long>(total), m);
  grid.weights.resize(static_cast<long>(total));

  std::vector<std::size_t> stride(static_cast<std::size_t>(m), 1);
  for (int d = m - 2; d >= 0; --d)
    stride[static_cast<std::size_t>(d)] =
        stride[static_cast<std::size_t>(d) + 1] *
        static_cast<std::size_t>(resolution[static_cast<std::size_t>(d) + 1]);

  Eigen::VectorXd theta(m);
  for (std::size_t i = 0; i < total; ++i) {
    for (int d = 0; d < m; ++d) {
      const std::size_t idx = (i / stride[static_cast<std::size_t>(d)]) %
                              static_cast<std::size_t>(resolution[static_cast<std::size_t>(d)]);
      theta[d] = box.lower[d] +
                 (static_cast<double>(idx) + 0.5) * box.extent(d) /
                     resolution[static_cast<std::size_t>(d)];
    }
    grid.nodes.row(static_cast<long>(i)) = theta.transpose();
    grid.weights[static_cast<long>(i)] = dist.density(theta) * cell_volume;
  }
  return grid;
}

// Latin hypercube design: n points, each dimension stratified into n equal
// slices with exactly one point per slice. Deterministic for a fixed seed.
inline Eigen::MatrixXd latin_hypercube(int n, const Box& box,
                                       std::uint64_t seed) {
  if (n < 1) throw Error("latin hypercube needs n >= 1");
  box.validate();
  const int m = box.dimension();
  Rng rng(seed);
  Eigen::MatrixXd points(n, m);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int d = 0; d < m; ++d) {
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.integer(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < n; ++i) {
      const double frac =
          (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n;
      points(i, d) = box.lower[d] + frac * box.extent(d);
    }
  }
  return points;
}

} // namespace seqde

#endif // SEQDE_INPUT_HPP
