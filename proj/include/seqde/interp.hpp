// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_INTERP_HPP
#define SEQDE_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "seqde/csv.hpp"
#include "seqde/errors.hpp"

namespace seqde {

enum class Interpolation { Multilinear, Cubic };

namespace detail {

// cell index i such that axis[i] <= x < axis[i+1], clamped to valid cells
inline long locate_cell(const Eigen::VectorXd& axis, double x) {
  const long n = axis.size();
  if (x <= axis[0]) return 0;
  if (x >= axis[n - 1]) return n - 2;
  const double* begin = axis.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  long i = static_cast<long>(it - begin) - 1;
  if (i > n - 2) i = n - 2;
  return i;
}

// Catmull-Rom style cubic through 4 samples with non-uniform spacing;
// tangents from centered differences, clamped to one-sided at the ends.
inline double cubic_segment(const double* xs, const double* ys, bool has_left,
                            bool has_right, double x) {
  const double x1 = xs[1], x2 = xs[2];
  const double y1 = ys[1], y2 = ys[2];
  const double h = x2 - x1;
  const double t = (x - x1) / h;
  const double slope = (y2 - y1) / h;
  const double m1 = has_left ? (y2 - ys[0]) / (x2 - xs[0]) : slope;
  const double m2 = has_right ? (ys[3] - y1) / (xs[3] - x1) : slope;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y1 + (t3 - 2 * t2 + t) * h * m1 +
         (-2 * t3 + 3 * t2) * y2 + (t3 - t2) * h * m2;
}

// Recursive separable interpolation over a row-major tensor table.
// `offset`/`stride` select the sub-block for the dimensions already fixed.
inline double tensor_interp_rec(const csv::TensorTable& t,
                                const Eigen::VectorXd& theta,
                                Interpolation method, int dim,
                                std::size_t offset,
                                const std::vector<std::size_t>& stride) {
  const Eigen::VectorXd& axis = t.axes[static_cast<std::size_t>(dim)];
  const bool last = dim == t.dimension() - 1;
  const auto value_at = [&](long idx) {
    const std::size_t o =
        offset + static_cast<std::size_t>(idx) * stride[static_cast<std::size_t>(dim)];
    if (last) return t.values[static_cast<long>(o)];
    return tensor_interp_rec(t, theta, method, dim + 1, o, stride);
  };
  double x = theta[dim];
  x = std::min(std::max(x, axis[0]), axis[axis.size() - 1]); // clamp
  const long i = locate_cell(axis, x);
  if (method == Interpolation::Multilinear || axis.size() < 4) {
    const double t01 = (x - axis[i]) / (axis[i + 1] - axis[i]);
    const double a = value_at(i);
    const double b = value_at(i + 1);
    return a + (b - a) * t01;
  }
  const bool has_left = i > 0;
  const bool has_right = i < axis.size() - 2;
  double xs[4], ys[4];
  xs[1] = axis[i];
  xs[2] = axis[i + 1];
  ys[1] = value_at(i);
  ys[2] = value_at(i + 1);
  if (has_left) {
    xs[0] = axis[i - 1];
    ys[0] = value_at(i - 1);
  } else {
    xs[0] = xs[1];
    ys[0] = ys[1];
  }
  if (has_right) {
    xs[3] = axis[i + 2];
    ys[3] = value_at(i + 2);
  } else {
    xs[3] = xs[2];
    ys[3] = ys[2];
  }
  return cubic_segment(xs, ys, has_left, has_right, x);
}

inline std::vector<std::size_t> tensor_strides(const csv::TensorTable& t) {
  const int m = t.dimension();
  std::vector<std::size_t> stride(static_cast<std::size_t>(m), 1);
  for (int d = m - 2; d >= 0; --d)
    stride[static_cast<std::size_t>(d)] =
        stride[static_cast<std::size_t>(d) + 1] *
        static_cast<std::size_t>(t.axes[static_cast<std::size_t>(d) + 1].size());
  return stride;
}

} // namespace detail

// Evaluates a tensor-grid table at theta. Queries outside the grid are
// clamped to the boundary. Exact at the grid nodes for both methods.
inline double tensor_interpolate(const csv::TensorTable& table,
                                 const Eigen::VectorXd& theta,
                                 Interpolation method) {
  if (theta.size() != table.dimension())
    throw DimensionMismatch("query dimension does not match table");
  return detail::tensor_interp_rec(table, theta, method, 0, 0,
                                   detail::tensor_strides(table));
}

} // namespace seqde

#endif // SEQDE_INTERP_HPP
