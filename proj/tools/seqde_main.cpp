// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "seqde/experiment.hpp"
#include "seqde/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config (JSON)")
      ->required();
  cmd->add_option("--out", args.out,
                  "output directory (overrides config output_dir)");
  cmd->add_option("--threads", args.threads,
                  "worker thread cap for map evaluation (0 = leave as is)");
}

void apply_threads(int threads) {
  if (threads > 0) seqde::parallel::set_max_threads(threads);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential density estimation for expensive maps"};
  app.require_subcommand(1);

  CommonArgs run_args, oracle_args, baseline_args, diag_args;
  std::vector<int> sizes_override;
  int repeats_override = 0;

  CLI::App* run = app.add_subcommand(
      "run", "run the sequential sampler and export its artifacts");
  add_common(run, run_args);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "evaluate the exact pushforward pdf on a dense grid");
  add_common(oracle, oracle_args);

  CLI::App* baseline = app.add_subcommand(
      "baseline", "compare against Latin hypercube designs of fixed size");
  add_common(baseline, baseline_args);
  baseline->add_option("--sizes", sizes_override,
                       "design sizes (overrides config baseline.sizes)");
  baseline->add_option("--repeats", repeats_override,
                       "repeats per size (overrides config baseline.repeats)");

  CLI::App* diagnostics = app.add_subcommand(
      "diagnostics", "replay a checkpointed run and tabulate its criterion");
  add_common(diagnostics, diag_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      apply_threads(run_args.threads);
      return seqde::cmd_run(run_args.config, run_args.out);
    }
    if (oracle->parsed()) {
      apply_threads(oracle_args.threads);
      return seqde::cmd_oracle(oracle_args.config, oracle_args.out);
    }
    if (baseline->parsed()) {
      apply_threads(baseline_args.threads);
      return seqde::cmd_baseline(baseline_args.config, baseline_args.out,
                                 sizes_override, repeats_override);
    }
    apply_threads(diag_args.threads);
    return seqde::cmd_diagnostics(diag_args.config, diag_args.out);
  } catch (const seqde::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const seqde::MalformedTable& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const seqde::CorruptCheckpoint& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const seqde::ResolutionTooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
