// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "seqde/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json full_config() {
  return json::parse(R"({
    "version": 1,
    "problem": {"kind": "synthetic", "name": "ripple"},
    "input": {"kind": "gaussian", "variances": [0.5, 0.25]},
    "sampler": {
      "nstart": 6, "ncore": 4, "max_iterations": 12, "epsilon": 0.02,
      "alpha": 2.5, "recalibrate_every": 3, "grid_resolution": [40, 40],
      "bins": 24, "log_observable": false, "calibration_restarts": 4
    },
    "pso": {"swarm_size": 17, "iterations": 23, "inertia": 0.6,
            "cognitive": 1.2, "social": 1.7},
    "seeds": {"design": 101, "pso": 102, "calibration": 103},
    "oracle": {"resolution": [200, 200], "bins": 48},
    "baseline": {"sizes": [10, 20], "repeats": 3},
    "output_dir": "results"
  })");
}

seqde::ExperimentConfig parse(const json& j) {
  return seqde::parse_experiment_config(j, fs::path("."));
}

TEST(ExperimentConfigTest, FullConfigRoundTripsIntoSamplerSettings) {
  const seqde::ExperimentConfig cfg = parse(full_config());
  EXPECT_EQ(cfg.problem, seqde::ProblemKind::Synthetic);
  EXPECT_EQ(cfg.synthetic_name, "ripple");
  ASSERT_TRUE(cfg.has_input);
  ASSERT_EQ(cfg.input_variances.size(), 2);
  EXPECT_EQ(cfg.input_variances[1], 0.25);

  const seqde::SamplerConfig& sc = cfg.sampler;
  EXPECT_EQ(sc.nstart, 6);
  EXPECT_EQ(sc.ncore, 4);
  EXPECT_EQ(sc.max_iterations, 12);
  EXPECT_EQ(sc.epsilon, 0.02);
  EXPECT_EQ(sc.alpha, 2.5);
  EXPECT_EQ(sc.recalibrate_every, 3);
  EXPECT_EQ(sc.grid_resolution, (std::vector<int>{40, 40}));
  EXPECT_EQ(sc.bins, 24);
  EXPECT_EQ(sc.calibration_restarts, 4);
  EXPECT_EQ(sc.pso_swarm_size, 17);
  EXPECT_EQ(sc.pso_iterations, 23);
  EXPECT_EQ(sc.pso_inertia, 0.6);
  EXPECT_EQ(sc.pso_cognitive, 1.2);
  EXPECT_EQ(sc.pso_social, 1.7);
  EXPECT_EQ(sc.seeds.design, 101u);
  EXPECT_EQ(sc.seeds.pso, 102u);
  EXPECT_EQ(sc.seeds.calibration, 103u);

  ASSERT_TRUE(cfg.has_oracle);
  EXPECT_EQ(cfg.oracle_resolution, (std::vector<int>{200, 200}));
  EXPECT_EQ(cfg.oracle_bins, 48);
  ASSERT_TRUE(cfg.has_baseline);
  EXPECT_EQ(cfg.baseline_sizes, (std::vector<int>{10, 20}));
  EXPECT_EQ(cfg.baseline_repeats, 3);
  EXPECT_EQ(cfg.output_dir, (fs::path(".") / "results").string());
}

TEST(ExperimentConfigTest, OracleBinsDefaultToSamplerBins) {
  json j = full_config();
  j["oracle"].erase("bins");
  EXPECT_EQ(parse(j).oracle_bins, 24);
}

TEST(ExperimentConfigTest, UnknownKeysAreRejectedAtEveryLevel) {
  for (const char* path : {"/stray", "/problem/stray", "/input/stray",
                           "/sampler/stray", "/pso/stray", "/seeds/stray",
                           "/oracle/stray", "/baseline/stray"}) {
    json j = full_config();
    j[json::json_pointer(path)] = 1;
    EXPECT_THROW(parse(j), seqde::ConfigError) << path;
  }
}

TEST(ExperimentConfigTest, VersionMustBeOne) {
  json j = full_config();
  j["version"] = 2;
  EXPECT_THROW(parse(j), seqde::ConfigError);
  j.erase("version");
  EXPECT_THROW(parse(j), seqde::ConfigError);
}

TEST(ExperimentConfigTest, SeedsMustBeExplicit) {
  json j = full_config();
  j.erase("seeds");
  EXPECT_THROW(parse(j), seqde::ConfigError);

  j = full_config();
  j["seeds"].erase("pso");
  EXPECT_THROW(parse(j), seqde::ConfigError);

  j = full_config();
  j["seeds"]["design"] = "soon";
  EXPECT_THROW(parse(j), seqde::ConfigError);
}

TEST(ExperimentConfigTest, SamplerValidationStillApplies) {
  json j = full_config();
  j["sampler"]["nstart"] = 1;
  EXPECT_THROW(parse(j), seqde::ConfigError);

  j = full_config();
  j["sampler"].erase("grid_resolution");
  EXPECT_THROW(parse(j), seqde::ConfigError);
}

TEST(ExperimentConfigTest, OscillatorForbidsAnInputBlock) {
  json j = full_config();
  j["problem"] = {{"kind", "oscillator"}, {"modes", 2}};
  EXPECT_THROW(parse(j), seqde::ConfigError);
  j.erase("input");
  j["sampler"]["grid_resolution"] = {30, 30};
  const seqde::ExperimentConfig cfg = parse(j);
  EXPECT_EQ(cfg.problem, seqde::ProblemKind::Oscillator);
  EXPECT_EQ(cfg.oscillator_modes, 2);
}

TEST(ExperimentConfigTest, NonOscillatorRequiresAnInputBlock) {
  json j = full_config();
  j.erase("input");
  EXPECT_THROW(parse(j), seqde::ConfigError);
}

TEST(ExperimentConfigTest, ReferencedPathsMustExist) {
  json j = full_config();
  j["problem"] = {{"kind", "tabulated"}, {"path", "no_such_table.csv"}};
  EXPECT_THROW(parse(j), seqde::ConfigError);

  j = full_config();
  j["input"] = {{"kind", "empirical"}, {"path", "no_such_density.csv"}};
  EXPECT_THROW(parse(j), seqde::ConfigError);
}

TEST(ExperimentConfigTest, RelativePathsResolveAgainstTheConfigDirectory) {
  fs::create_directories("exp_work/rel");
  {
    std::ofstream out("exp_work/rel/table.csv");
    out << "theta_1,value\n-1,0.5\n0,1.0\n1,1.5\n2,2.0\n";
  }
  json j = full_config();
  j["problem"] = {{"kind", "tabulated"},
                  {"path", "table.csv"},
                  {"interpolation", "cubic"}};
  j["input"] = {{"kind", "gaussian"}, {"variances", {0.04}}};
  j["sampler"]["grid_resolution"] = {64};
  const seqde::ExperimentConfig cfg =
      seqde::parse_experiment_config(j, fs::path("exp_work/rel"));
  EXPECT_EQ(fs::path(cfg.tabulated_path).filename(), "table.csv");
  EXPECT_TRUE(fs::exists(cfg.tabulated_path));
  EXPECT_EQ(cfg.tabulated_interpolation, seqde::Interpolation::Cubic);

  const seqde::Problem problem = seqde::build_problem(cfg);
  Eigen::VectorXd theta(1);
  theta << 0.5;
  EXPECT_NEAR(problem.map(theta), 1.25, 1e-12); // linear table
}

TEST(ExperimentProblemTest, OscillatorInputUsesExpansionEigenvalues) {
  json j = full_config();
  j["problem"] = {{"kind", "oscillator"}, {"modes", 3}};
  j.erase("input");
  j["sampler"]["grid_resolution"] = {10, 10, 10};
  const seqde::Problem problem = seqde::build_problem(parse(j));
  EXPECT_EQ(problem.input.dimension(), 3);

  seqde::OscillatorParams params;
  const seqde::KlBasis basis =
      seqde::kl_expand(params.sigma_z, params.ell_z, params.horizon, 3);
  // box half-width is four standard deviations of each coefficient
  for (int d = 0; d < 3; ++d)
    EXPECT_NEAR(problem.input.bounds().upper[d],
                4.0 * std::sqrt(basis.eigenvalues[d]), 1e-9);

  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(3, 0.05);
  EXPECT_TRUE(std::isfinite(problem.map(theta)));
}

TEST(ExperimentProblemTest, SyntheticBuiltinsEvaluateTheirFormulas) {
  json j = full_config();
  j["problem"]["name"] = "cubic";
  j["input"]["variances"] = {1.0};
  j["sampler"]["grid_resolution"] = {50};
  Eigen::VectorXd t1(1);
  t1 << 1.7;
  EXPECT_NEAR(seqde::build_problem(parse(j)).map(t1), 1.7 * 1.7 * 1.7,
              1e-12);

  j["problem"]["name"] = "tanh_ramp";
  EXPECT_NEAR(seqde::build_problem(parse(j)).map(t1),
              std::tanh(1.7) + 0.17, 1e-12);

  j["problem"]["name"] = "ripple";
  j["input"]["variances"] = {1.0, 1.0};
  j["sampler"]["grid_resolution"] = {30, 30};
  Eigen::VectorXd t2(2);
  t2 << 0.3, -0.4;
  EXPECT_NEAR(seqde::build_problem(parse(j)).map(t2),
              std::sin(0.6) * std::cos(-0.8) + 0.3 * (0.3 - 0.4), 1e-12);
}

TEST(ExperimentProblemTest, MismatchedDimensionsAreRejected) {
  json j = full_config();
  j["problem"]["name"] = "cubic"; // one-dimensional map, two variances
  EXPECT_THROW(seqde::build_problem(parse(j)), seqde::ConfigError);

  j["problem"]["name"] = "nonesuch";
  EXPECT_THROW(seqde::build_problem(parse(j)), seqde::ConfigError);
}

TEST(ExperimentProblemTest, GaussianBoundsOverrideTheDefaultBox) {
  json j = full_config();
  j["input"]["bounds"] = {{"lower", {-1.0, -1.0}}, {"upper", {1.0, 2.0}}};
  j["input"]["variances"] = {0.04, 0.09};
  const seqde::Problem problem = seqde::build_problem(parse(j));
  EXPECT_EQ(problem.input.bounds().lower[0], -1.0);
  EXPECT_EQ(problem.input.bounds().upper[1], 2.0);
}

} // namespace
