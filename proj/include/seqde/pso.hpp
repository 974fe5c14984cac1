// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_PSO_HPP
#define SEQDE_PSO_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "seqde/errors.hpp"
#include "seqde/input.hpp"
#include "seqde/parallel.hpp"
#include "seqde/rng.hpp"

namespace seqde {

struct PsoConfig {
  int swarm_size = 40;
  int iterations = 60;
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;
  std::uint64_t seed = 0;
  Box bounds;

  void validate() const {
    if (swarm_size < 1) throw Error("swarm_size must be >= 1");
    if (iterations < 1) throw Error("iterations must be >= 1");
    if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0))
      throw Error("pso coefficients must be nonnegative");
    bounds.validate();
  }
};

struct PsoResult {
  Eigen::VectorXd best_point;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd incumbent_history; // best value after each iteration
  long evaluations = 0;
  long failed_evaluations = 0;
};

// Global-best particle swarm minimization with per-dimension velocity
// clamping (20% of the box extent) and reflective boundary handling.
// Random draws happen in a fixed serial order, objective evaluations may
// run in parallel; results are deterministic for a fixed seed either way.
// Objective calls that throw count as failed; an iteration in which more
// than half the swarm fails aborts with ObjectiveFailure.
template <class F>
PsoResult pso_minimize(F&& objective, const PsoConfig& cfg) {
  cfg.validate();
  const int m = cfg.bounds.dimension();
  const int n = cfg.swarm_size;
  Rng rng(cfg.seed);

  Eigen::VectorXd vmax(m);
  for (int d = 0; d < m; ++d) vmax[d] = 0.2 * cfg.bounds.extent(d);

  Eigen::MatrixXd pos(n, m), vel(n, m);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < m; ++d) {
      pos(i, d) = rng.uniform(cfg.bounds.lower[d], cfg.bounds.upper[d]);
      vel(i, d) = rng.uniform(-vmax[d], vmax[d]);
    }

  PsoResult result;
  result.incumbent_history.resize(cfg.iterations + 1);

  Eigen::VectorXd values(n);
  std::vector<char> failed(static_cast<std::size_t>(n));
  const auto evaluate_swarm = [&] {
    parallel::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      const Eigen::VectorXd theta = pos.row(static_cast<long>(i)).transpose();
      try {
        const double v = objective(theta);
        values[static_cast<long>(i)] =
            std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        failed[i] = !std::isfinite(v);
      } catch (...) {
        values[static_cast<long>(i)] = std::numeric_limits<double>::infinity();
        failed[i] = 1;
      }
    });
    long bad = 0;
    for (int i = 0; i < n; ++i) bad += failed[static_cast<std::size_t>(i)];
    result.evaluations += n;
    result.failed_evaluations += bad;
    if (2 * bad > n)
      throw ObjectiveFailure(std::to_string(bad) + " of " + std::to_string(n) +
                             " objective evaluations failed in one iteration");
  };

  evaluate_swarm();
  Eigen::MatrixXd pbest_pos = pos;
  Eigen::VectorXd pbest_val = values;
  int gbest = 0;
  for (int i = 1; i < n; ++i)
    if (pbest_val[i] < pbest_val[gbest]) gbest = i;
  Eigen::VectorXd gbest_pos = pbest_pos.row(gbest).transpose();
  double gbest_val = pbest_val[gbest];
  result.incumbent_history[0] = gbest_val;

  for (int it = 0; it < cfg.iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < m; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = cfg.inertia * vel(i, d) +
                   cfg.cognitive * r1 * (pbest_pos(i, d) - pos(i, d)) +
                   cfg.social * r2 * (gbest_pos[d] - pos(i, d));
        if (v > vmax[d]) v = vmax[d];
        if (v < -vmax[d]) v = -vmax[d];
        double x = pos(i, d) + v;
        // reflect off the box walls, flipping the velocity
        int guard = 0;
        while ((x < cfg.bounds.lower[d] || x > cfg.bounds.upper[d]) &&
               guard++ < 8) {
          if (x < cfg.bounds.lower[d]) x = 2.0 * cfg.bounds.lower[d] - x;
          if (x > cfg.bounds.upper[d]) x = 2.0 * cfg.bounds.upper[d] - x;
          v = -v;
        }
        if (x < cfg.bounds.lower[d]) x = cfg.bounds.lower[d];
        if (x > cfg.bounds.upper[d]) x = cfg.bounds.upper[d];
        pos(i, d) = x;
        vel(i, d) = v;
      }
    }
    evaluate_swarm();
    for (int i = 0; i < n; ++i) {
      if (values[i] < pbest_val[i]) {
        pbest_val[i] = values[i];
        pbest_pos.row(i) = pos.row(i);
      }
      if (values[i] < gbest_val) {
        gbest_val = values[i];
        gbest_pos = pos.row(i).transpose();
      }
    }
    result.incumbent_history[it + 1] = gbest_val;
  }

  if (!std::isfinite(gbest_val))
    throw ObjectiveFailure("no successful objective evaluation");
  result.best_point = gbest_pos;
  result.best_value = gbest_val;
  return result;
}

} // namespace seqde

#endif // SEQDE_PSO_HPP
