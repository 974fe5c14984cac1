// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Reruns of the command-line pipeline with identical config and seeds must
// produce byte-identical records, independent of the worker thread count.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "harness.hpp"

using acceptance::format;
using acceptance::Harness;
using acceptance::Timer;

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SEQDE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

} // namespace

int main() {
  Harness h;

  fs::remove_all("det_work");
  fs::create_directories("det_work");
  {
    std::ofstream cfg("det_work/experiment.json");
    cfg << R"({
  "version": 1,
  "problem": {"kind": "synthetic", "name": "ripple"},
  "input": {"kind": "gaussian", "variances": [0.8, 0.8]},
  "sampler": {
    "nstart": 6, "ncore": 6, "max_iterations": 10, "epsilon": 1e-9,
    "grid_resolution": [50, 50], "bins": 40, "calibration_restarts": 4
  },
  "pso": {"swarm_size": 15, "iterations": 20},
  "seeds": {"design": 5, "pso": 6, "calibration": 7}
})";
  }
  const std::string cfg_arg = " --config det_work/experiment.json --out ";

  Timer first_run;
  const int rc1 = run_cli("run" + cfg_arg + "det_work/a1 --threads 1");
  const double first_cost = first_run.seconds();
  const int rc2 = run_cli("run" + cfg_arg + "det_work/a2 --threads 1");
  h.check(rc1 == rc2 && (rc1 == 0 || rc1 == 3),
          "criterion 10: identical exit codes on rerun",
          format("codes %.0f and %.0f", static_cast<double>(rc1),
                 static_cast<double>(rc2)));
  h.check(!slurp("det_work/a1/records.csv").empty() &&
              slurp("det_work/a1/records.csv") ==
                  slurp("det_work/a2/records.csv"),
          "criterion 10: byte-identical records at 1 thread", "rerun match");

  const int rc3 = run_cli("run" + cfg_arg + "det_work/b1 --threads 4");
  const int rc4 = run_cli("run" + cfg_arg + "det_work/b2 --threads 4");
  h.check(rc3 == rc1 && rc4 == rc1,
          "criterion 10: thread count does not change the exit code",
          format("codes %.0f and %.0f", static_cast<double>(rc3),
                 static_cast<double>(rc4)));
  h.check(!slurp("det_work/b1/records.csv").empty() &&
              slurp("det_work/b1/records.csv") ==
                  slurp("det_work/b2/records.csv"),
          "criterion 10: byte-identical records at 4 threads", "rerun match");
  h.check(slurp("det_work/a1/records.csv") ==
              slurp("det_work/b1/records.csv"),
          "criterion 10: records agree across thread counts",
          "1-thread and 4-thread runs match");

  Timer rest;
  h.check(rest.seconds() < first_cost * 2.0 + 1.0,
          "criterion 10: runtime",
          format("comparison time %.2f s, cap 2x run cost + 1 s",
                 rest.seconds()));
  std::printf("%d check(s) failed\n", h.failures());
  return h.exit_code();
}
