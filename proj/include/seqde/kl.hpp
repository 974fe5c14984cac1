// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_KL_HPP
#define SEQDE_KL_HPP

#include <cmath>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "seqde/errors.hpp"

namespace seqde {

// Truncated Karhunen-Loeve basis of a stationary squared-exponential
// process on [0, horizon], sampled on a uniform time grid. Eigenfunctions
// are orthonormal in the trapezoid-weighted inner product and the i-th
// coefficient has variance eigenvalues[i].
struct KlBasis {
  Eigen::VectorXd eigenvalues;    // descending, size m
  Eigen::MatrixXd eigenfunctions; // grid_size x m
  Eigen::VectorXd time_grid;      // uniform over [0, horizon]

  int modes() const { return static_cast<int>(eigenvalues.size()); }
  int grid_size() const { return static_cast<int>(time_grid.size()); }
};

inline Eigen::VectorXd trapezoid_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w[0] = 0.5 * h;
  w[n - 1] = 0.5 * h;
  return w;
}

// Covariance sigma^2 exp(-(t-s)^2 / (2 ell^2)) on the grid, symmetrized by
// the square roots of the trapezoid weights and eigendecomposed; the top-m
// pairs are rescaled back so the eigenfunctions are orthonormal in the
// continuous inner product.
inline KlBasis kl_expand(double sigma, double ell, double horizon, int m,
                         int grid_size = 512) {
  if (!(sigma > 0.0) || !(ell > 0.0) || !(horizon > 0.0))
    throw Error("kl_expand needs positive sigma, ell, horizon");
  if (m < 1) throw Error("kl_expand needs at least one mode");
  if (grid_size < 2 || m > grid_size)
    throw Error("kl_expand grid must have at least max(2, m) points");

  const int n = grid_size;
  const double h = horizon / (n - 1);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = i * h;

  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i) {
    C(i, i) = sigma * sigma;
    for (int j = 0; j < i; ++j) {
      const double dt = (t[i] - t[j]) / ell;
      const double v = sigma * sigma * std::exp(-0.5 * dt * dt);
      C(i, j) = v;
      C(j, i) = v;
    }
  }

  const Eigen::VectorXd w = trapezoid_weights(n, h);
  const Eigen::VectorXd sqrt_w = w.cwiseSqrt();
  Eigen::MatrixXd B = sqrt_w.asDiagonal() * C * sqrt_w.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
  if (solver.info() != Eigen::Success)
    throw Error("eigendecomposition of the covariance failed");

  KlBasis basis;
  basis.time_grid = t;
  basis.eigenvalues.resize(m);
  basis.eigenfunctions.resize(n, m);
  for (int k = 0; k < m; ++k) {
    const int src = n - 1 - k; // solver sorts ascending
    const double lambda = solver.eigenvalues()[src];
    if (!(lambda > 0.0))
      throw NonPositiveEigenvalue("retained eigenvalue " +
                                  std::to_string(k + 1) +
                                  " is not positive: " +
                                  std::to_string(lambda));
    basis.eigenvalues[k] = lambda;
    basis.eigenfunctions.col(k) =
        solver.eigenvectors().col(src).cwiseQuotient(sqrt_w);
  }
  return basis;
}

// The realization sum_i theta_i e_i(t) on the basis time grid.
inline Eigen::VectorXd forcing_signal(const KlBasis& basis,
                                      const Eigen::VectorXd& theta) {
  if (theta.size() != basis.modes())
    throw DimensionMismatch("forcing coefficients do not match basis modes");
  return basis.eigenfunctions * theta;
}

} // namespace seqde

#endif // SEQDE_KL_HPP
