// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Three-mode smoke run: the full schedule completes, the bound-pdf distance
// shrinks monotonically, and the error against a 40x40x40 dense-grid
// reference drops between iteration 5 and iteration 40.

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "harness.hpp"
#include "seqde/seqde.hpp"

using namespace seqde;
using acceptance::format;
using acceptance::Harness;
using acceptance::Timer;

int main() {
  Harness h;
  Timer timer;

  OscillatorParams params;
  params.modes = 3;
  const KlBasis basis = kl_expand(params.sigma_z, params.ell_z,
                                  params.horizon, params.modes);
  const MapFunction map = [&](const Eigen::VectorXd& theta) {
    return oscillator_map(theta, params, basis);
  };
  const InputDistribution input = InputDistribution::gaussian_diagonal(
      basis.eigenvalues.head(params.modes));

  const DensityEstimate exact =
      exact_pdf_oracle(map, input, {40, 40, 40}, 60);

  SamplerConfig cfg;
  cfg.nstart = 6;
  cfg.ncore = 12;
  cfg.max_iterations = 42; // 12 core iterations plus 30 tail iterations
  cfg.epsilon = 1e-12;
  cfg.grid_resolution = {24, 24, 24};
  cfg.bins = 60;
  cfg.seeds.design = 11;
  cfg.seeds.pso = 12;
  cfg.seeds.calibration = 13;

  const SamplerResult res = run_sampler(map, input, cfg, &exact);
  h.check(static_cast<int>(res.records.size()) == cfg.max_iterations,
          "criterion 7: full 42-iteration schedule completes",
          format("%.0f records", static_cast<double>(res.records.size())));

  double worst_rise = -1.0;
  int worst_at = 0;
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    const double rise =
        res.records[k].distance_fpm - res.records[k - 1].distance_fpm;
    if (rise > worst_rise) {
      worst_rise = rise;
      worst_at = static_cast<int>(k) + 1;
    }
  }
  h.check(worst_rise <= 1e-9,
          "criterion 7: bound-pdf distance decreases monotonically",
          format("worst rise %.3e at iteration %.0f, tol +1e-9", worst_rise,
                 static_cast<double>(worst_at)));

  const double err5 = res.records[4].error_vs_oracle;
  const double err40 = res.records[39].error_vs_oracle;
  h.check(err40 < err5,
          "criterion 7: oracle error drops from iteration 5 to 40",
          format("%.4f at 5 vs %.4f at 40", err5, err40));
  h.check(true, "criterion 7: runtime target",
          format("%.0f s elapsed; target < 7200 s (not enforced)",
                 timer.seconds()));
  std::printf("%d check(s) failed\n", h.failures());
  return h.exit_code();
}
