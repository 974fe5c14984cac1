// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_GP_HPP
#define SEQDE_GP_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "seqde/csv.hpp"
#include "seqde/errors.hpp"
#include "seqde/parallel.hpp"
#include "seqde/rng.hpp"

namespace seqde {

// Squared-exponential kernel parameters with one lengthscale per input
// dimension. Equal lengthscales recover the isotropic kernel.
struct KernelHyperparams {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double jitter = 0.0;

  void validate(int dimension) const {
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
      throw Error("signal_variance must be positive and finite");
    if (lengthscales.size() != dimension)
      throw DimensionMismatch("expected " + std::to_string(dimension) +
                              " lengthscales, got " +
                              std::to_string(lengthscales.size()));
    for (long d = 0; d < lengthscales.size(); ++d)
      if (!(lengthscales[d] > 0.0) || !std::isfinite(lengthscales[d]))
        throw Error("lengthscales must be positive and finite");
    if (!(jitter > 0.0) || !std::isfinite(jitter))
      throw Error("jitter must be positive and finite");
  }
};

inline double default_jitter(double signal_variance) {
  return 1e-8 * signal_variance;
}

inline KernelHyperparams make_hyperparams(double signal_variance,
                                          Eigen::VectorXd lengthscales) {
  KernelHyperparams hp;
  hp.signal_variance = signal_variance;
  hp.lengthscales = std::move(lengthscales);
  hp.jitter = default_jitter(signal_variance);
  return hp;
}

inline KernelHyperparams make_hyperparams(double signal_variance,
                                          Eigen::VectorXd lengthscales,
                                          double jitter) {
  KernelHyperparams hp;
  hp.signal_variance = signal_variance;
  hp.lengthscales = std::move(lengthscales);
  hp.jitter = jitter;
  return hp;
}

inline double kernel_value(const KernelHyperparams& hp,
                           const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (long d = 0; d < a.size(); ++d) {
    const double z = (a[d] - b[d]) / hp.lengthscales[d];
    s += z * z;
  }
  return hp.signal_variance * std::exp(-0.5 * s);
}

// Design points with observed scalar values. Points are pairwise distinct
// within MIN_SEPARATION in the 2-norm.
class Dataset {
public:
  static constexpr double MIN_SEPARATION = 1e-9;

  Dataset() = default;
  explicit Dataset(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw DimensionMismatch("dimension must be >= 1");
  }

  void add(const Eigen::VectorXd& theta, double value) {
    if (dimension_ == 0) dimension_ = static_cast<int>(theta.size());
    if (theta.size() != dimension_)
      throw DimensionMismatch("point has dimension " +
                              std::to_string(theta.size()) + ", dataset has " +
                              std::to_string(dimension_));
    for (long d = 0; d < theta.size(); ++d)
      if (!std::isfinite(theta[d]))
        throw Error("design point has a non-finite coordinate");
    if (!std::isfinite(value)) throw Error("observed value is not finite");
    for (int i = 0; i < size_; ++i)
      if ((points_.row(i).transpose() - theta).norm() < MIN_SEPARATION)
        throw DuplicatePoint("point coincides with design point " +
                             std::to_string(i) + " within 1e-9");
    if (size_ == capacity_) {
      capacity_ = capacity_ == 0 ? 8 : 2 * capacity_;
      points_.conservativeResize(capacity_, dimension_);
      values_.conservativeResize(capacity_);
    }
    points_.row(size_) = theta.transpose();
    values_[size_] = value;
    ++size_;
  }

  int size() const { return size_; }
  int dimension() const { return dimension_; }

  Eigen::VectorXd point(int i) const { return points_.row(i).transpose(); }
  double value(int i) const { return values_[i]; }

  Eigen::MatrixXd points() const { return points_.topRows(size_); }
  Eigen::VectorXd values() const { return values_.head(size_); }

  double mean_value() const {
    if (size_ == 0) throw Error("mean of an empty dataset");
    return values_.head(size_).mean();
  }

  // nearest design point distance to theta, +inf when empty
  double distance_to(const Eigen::VectorXd& theta) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size_; ++i)
      best = std::min(best, (points_.row(i).transpose() - theta).norm());
    return best;
  }

  void save_csv(const std::string& path) const {
    std::vector<std::string> header;
    for (int d = 0; d < dimension_; ++d)
      header.push_back("theta_" + std::to_string(d + 1));
    header.push_back("q");
    std::vector<std::vector<double>> rows;
    rows.reserve(size_);
    for (int i = 0; i < size_; ++i) {
      std::vector<double> row(dimension_ + 1);
      for (int d = 0; d < dimension_; ++d) row[d] = points_(i, d);
      row[dimension_] = values_[i];
      rows.push_back(std::move(row));
    }
    csv::write_table(path, header, rows);
  }

  static Dataset load_csv(const std::string& path) {
    const csv::Table table = csv::read_table(path);
    if (table.header.size() < 2 || table.header.back() != "q")
      throw MalformedTable("'" + path +
                           "' must have theta_1..theta_m,q columns");
    const int m = static_cast<int>(table.header.size()) - 1;
    for (int d = 0; d < m; ++d)
      if (table.header[d] != "theta_" + std::to_string(d + 1))
        throw MalformedTable("'" + path + "' has unexpected column '" +
                             table.header[d] + "'");
    Dataset out(m);
    for (const auto& row : table.rows) {
      Eigen::VectorXd theta(m);
      for (int d = 0; d < m; ++d) theta[d] = row[d];
      out.add(theta, row[m]);
    }
    return out;
  }

private:
  int dimension_ = 0;
  int size_ = 0;
  int capacity_ = 0;
  Eigen::MatrixXd points_;
  Eigen::VectorXd values_;
};

// Batch prediction over a set of nodes. `solved` holds L^{-1} K0(design,
// nodes), one column per node; the acquisition reuses it to update node
// variances under a hypothetical extra observation without refitting.
struct GridPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  Eigen::MatrixXd solved;
};

// Gaussian-process posterior with constant prior mean. Immutable: append()
// returns a new posterior and extends the Cholesky factor in O(n^2).
class GpPosterior {
public:
  static GpPosterior fit(const Dataset& data, const KernelHyperparams& hp,
                         double prior_mean) {
    if (data.size() < 1) throw Error("cannot fit to an empty dataset");
    hp.validate(data.dimension());
    if (!std::isfinite(prior_mean)) throw Error("prior mean is not finite");
    const int n = data.size();
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
      K(i, i) = hp.signal_variance + hp.jitter;
      for (int j = 0; j < i; ++j) {
        const double v = kernel_value(hp, data.point(i), data.point(j));
        K(i, j) = v;
        K(j, i) = v;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
      throw FactorizationFailure(
          "kernel matrix is not positive definite at n=" + std::to_string(n));
    GpPosterior gp;
    gp.data_ = data;
    gp.hp_ = hp;
    gp.prior_mean_ = prior_mean;
    gp.chol_ = llt.matrixL();
    gp.refresh_weights();
    return gp;
  }

  // prior mean set to the dataset mean
  static GpPosterior fit(const Dataset& data, const KernelHyperparams& hp) {
    return fit(data, hp, data.mean_value());
  }

  double mean(const Eigen::VectorXd& theta) const {
    return prior_mean_ + kernel_vector(theta).dot(weights_);
  }

  double variance(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd v =
        chol_.triangularView<Eigen::Lower>().solve(kernel_vector(theta));
    const double var = hp_.signal_variance - v.squaredNorm();
    return var > 0.0 ? var : 0.0;
  }

  // Extends the factor with one forward solve and a square root; the prior
  // mean is preserved so the posterior mean field is unchanged when `value`
  // equals the current predictive mean at `theta`.
  GpPosterior append(const Eigen::VectorXd& theta, double value) const {
    if (theta.size() != data_.dimension())
      throw DimensionMismatch("appended point has wrong dimension");
    if (data_.distance_to(theta) < Dataset::MIN_SEPARATION)
      throw DuplicatePoint("appended point duplicates a design point");
    const int n = data_.size();
    const Eigen::VectorXd c21 = kernel_vector(theta);
    const Eigen::VectorXd l21 =
        chol_.triangularView<Eigen::Lower>().solve(c21);
    const double d = hp_.signal_variance + hp_.jitter - l21.squaredNorm();
    if (!(d > 0.0))
      throw FactorizationFailure(
          "augmented kernel matrix lost positive definiteness");
    GpPosterior gp;
    gp.data_ = data_;
    gp.data_.add(theta, value);
    gp.hp_ = hp_;
    gp.prior_mean_ = prior_mean_;
    gp.chol_.setZero(n + 1, n + 1);
    gp.chol_.topLeftCorner(n, n) = chol_;
    gp.chol_.row(n).head(n) = l21.transpose();
    gp.chol_(n, n) = std::sqrt(d);
    gp.refresh_weights();
    return gp;
  }

  GridPrediction predict(const Eigen::MatrixXd& nodes) const {
    const int n = data_.size();
    const long N = nodes.rows();
    if (nodes.cols() != data_.dimension())
      throw DimensionMismatch("prediction nodes have wrong dimension");
    GridPrediction out;
    out.solved.resize(n, N);
    const Eigen::MatrixXd pts = data_.points();
    parallel::parallel_for(static_cast<std::size_t>(N), [&](std::size_t j) {
      const long col = static_cast<long>(j);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int d = 0; d < nodes.cols(); ++d) {
          const double z = (pts(i, d) - nodes(col, d)) / hp_.lengthscales[d];
          s += z * z;
        }
        out.solved(i, col) = hp_.signal_variance * std::exp(-0.5 * s);
      }
    });
    out.mean = (out.solved.transpose() * weights_).array() + prior_mean_;
    chol_.triangularView<Eigen::Lower>().solveInPlace(out.solved);
    const Eigen::ArrayXd norms =
        out.solved.colwise().squaredNorm().transpose().array();
    out.variance = (hp_.signal_variance - norms).max(0.0).matrix();
    return out;
  }

  Eigen::VectorXd kernel_vector(const Eigen::VectorXd& theta) const {
    if (theta.size() != data_.dimension())
      throw DimensionMismatch("query point has dimension " +
                              std::to_string(theta.size()) +
                              ", posterior has " +
                              std::to_string(data_.dimension()));
    const int n = data_.size();
    Eigen::VectorXd k(n);
    for (int i = 0; i < n; ++i)
      k[i] = kernel_value(hp_, data_.point(i), theta);
    return k;
  }

  double log_marginal_likelihood() const {
    const int n = data_.size();
    const Eigen::VectorXd r = data_.values().array() - prior_mean_;
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(chol_(i, i));
    return -0.5 * r.dot(weights_) - logdet -
           0.5 * n * std::log(2.0 * 3.14159265358979323846);
  }

  const Dataset& data() const { return data_; }
  const KernelHyperparams& hyperparams() const { return hp_; }
  double prior_mean() const { return prior_mean_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Restores a posterior from serialized state without refactorizing; used
  // by checkpoint resume so continued runs are bitwise reproducible.
  static GpPosterior restore(Dataset data, KernelHyperparams hp,
                             double prior_mean, Eigen::MatrixXd chol,
                             Eigen::VectorXd weights) {
    GpPosterior gp;
    gp.data_ = std::move(data);
    gp.hp_ = std::move(hp);
    gp.prior_mean_ = prior_mean;
    gp.chol_ = std::move(chol);
    gp.weights_ = std::move(weights);
    if (gp.chol_.rows() != gp.data_.size() ||
        gp.chol_.cols() != gp.data_.size() ||
        gp.weights_.size() != gp.data_.size())
      throw DimensionMismatch("restored factor does not match dataset size");
    return gp;
  }

private:
  GpPosterior() = default;

  void refresh_weights() {
    const Eigen::VectorXd r = data_.values().array() - prior_mean_;
    weights_ = chol_.triangularView<Eigen::Lower>().solve(r);
    chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(weights_);
  }

  Dataset data_;
  KernelHyperparams hp_;
  double prior_mean_ = 0.0;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd weights_;
};

namespace detail {

inline double log_marginal_direct(const Eigen::MatrixXd& points,
                                  const Eigen::VectorXd& centered,
                                  const KernelHyperparams& hp) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    K(i, i) = hp.signal_variance + hp.jitter;
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int d = 0; d < points.cols(); ++d) {
        const double z = (points(i, d) - points(j, d)) / hp.lengthscales[d];
        s += z * z;
      }
      const double v = hp.signal_variance * std::exp(-0.5 * s);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success)
    return -std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd& L = llt.matrixL();
  Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(centered);
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += std::log(L(i, i));
  return -0.5 * w.squaredNorm() - logdet -
         0.5 * n * std::log(2.0 * 3.14159265358979323846);
}

} // namespace detail

// Maximizes the log marginal likelihood over (signal_variance, lengthscales)
// by multi-start cyclic coordinate descent in log space. Bounds are
// [1e-3, 1e3] on every coordinate. Deterministic for a fixed seed.
inline KernelHyperparams calibrate_hyperparams(const Dataset& data,
                                               int restarts,
                                               std::uint64_t seed) {
  if (data.size() < 3)
    throw Error("hyperparameter calibration needs at least 3 points");
  if (restarts < 1) throw Error("restarts must be >= 1");
  const int m = data.dimension();
  const int dims = m + 1; // log signal_variance, log lengthscales
  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);

  const Eigen::MatrixXd points = data.points();
  const Eigen::VectorXd centered =
      data.values().array() - data.mean_value();

  const auto objective = [&](const Eigen::VectorXd& x) {
    KernelHyperparams hp;
    hp.signal_variance = std::exp(x[0]);
    hp.lengthscales.resize(m);
    for (int d = 0; d < m; ++d) hp.lengthscales[d] = std::exp(x[1 + d]);
    hp.jitter = default_jitter(hp.signal_variance);
    return detail::log_marginal_direct(points, centered, hp);
  };

  // line search on one coordinate: coarse scan then golden-section refine
  const auto improve_coordinate = [&](Eigen::VectorXd& x, int c,
                                      double& best_val) {
    constexpr int COARSE = 21;
    double best_t = x[c];
    for (int i = 0; i < COARSE; ++i) {
      const double t = lo + (hi - lo) * i / (COARSE - 1);
      Eigen::VectorXd y = x;
      y[c] = t;
      const double v = objective(y);
      if (v > best_val) {
        best_val = v;
        best_t = t;
      }
    }
    const double step = (hi - lo) / (COARSE - 1);
    double a = std::max(lo, best_t - step);
    double b = std::min(hi, best_t + step);
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    Eigen::VectorXd y = x;
    y[c] = x1;
    double f1 = objective(y);
    y[c] = x2;
    double f2 = objective(y);
    for (int it = 0; it < 30 && (b - a) > 1e-4; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        y[c] = x2;
        f2 = objective(y);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        y[c] = x1;
        f1 = objective(y);
      }
    }
    const double t = f1 > f2 ? x1 : x2;
    y[c] = t;
    const double v = objective(y);
    if (v > best_val) {
      best_val = v;
      best_t = t;
    }
    x[c] = best_t;
  };

  Rng rng(seed);
  const auto clamp_log = [&](double v) {
    return std::min(hi, std::max(lo, std::log(v)));
  };

  Eigen::VectorXd best_x;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd x(dims);
    if (r == 0) {
      // heuristic start: empirical variance, half the data extent
      const double var = centered.squaredNorm() / std::max(1, data.size() - 1);
      x[0] = clamp_log(var > 0.0 ? var : 1.0);
      for (int d = 0; d < m; ++d) {
        const double extent =
            points.col(d).maxCoeff() - points.col(d).minCoeff();
        x[1 + d] = clamp_log(extent > 0.0 ? 0.5 * extent : 1.0);
      }
    } else {
      for (int c = 0; c < dims; ++c) x[c] = rng.uniform(lo, hi);
    }
    double val = objective(x);
    for (int sweep = 0; sweep < 4; ++sweep) {
      const double before = val;
      for (int c = 0; c < dims; ++c) improve_coordinate(x, c, val);
      if (val - before < 1e-9) break;
    }
    if (val > best_val) {
      best_val = val;
      best_x = x;
    }
  }
  if (!std::isfinite(best_val))
    throw FactorizationFailure(
        "every hyperparameter candidate failed to factorize");

  KernelHyperparams hp;
  hp.signal_variance = std::exp(best_x[0]);
  hp.lengthscales.resize(m);
  for (int d = 0; d < m; ++d) hp.lengthscales[d] = std::exp(best_x[1 + d]);
  hp.jitter = default_jitter(hp.signal_variance);
  return hp;
}

} // namespace seqde

#endif // SEQDE_GP_HPP
