// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Minimal in-process use of the library: estimate the pushforward density
// of a scalar map under a Gaussian input with a handful of adaptive samples,
// then compare against the dense-grid answer.

#include <cstdio>

#include <Eigen/Core>

#include "seqde/seqde.hpp"

int main() {
  const seqde::MapFunction map = [](const Eigen::VectorXd& theta) {
    return std::tanh(2.0 * theta[0]) + 0.1 * theta[0] * theta[0];
  };
  const seqde::InputDistribution input =
      seqde::InputDistribution::gaussian_diagonal(
          Eigen::VectorXd::Constant(1, 1.0));

  seqde::SamplerConfig cfg;
  cfg.nstart = 6;
  cfg.ncore = 6;
  cfg.max_iterations = 20;
  cfg.epsilon = 5e-2;
  cfg.grid_resolution = {800};
  cfg.bins = 50;

  const seqde::DensityEstimate exact =
      seqde::exact_pdf_oracle(map, input, {8000}, cfg.bins);
  const seqde::SamplerResult res =
      seqde::run_sampler(map, input, cfg, &exact);

  std::printf("%6s %12s %14s %14s\n", "iter", "criterion", "bound dist",
              "error vs exact");
  for (const seqde::IterationRecord& r : res.records)
    std::printf("%6d %12.4e %14.4e %14.4e\n", r.index, r.criterion_value,
                r.distance_fpm, r.error_vs_oracle);
  std::printf("\n%s after %d adaptive evaluations (%d total)\n",
              res.converged ? "converged" : "hit the iteration cap",
              static_cast<int>(res.records.size()), res.data.size());
  std::printf("final tail-weighted error: %.4e\n",
              seqde::log_l1_error(res.final_pdf, exact));
  return 0;
}
