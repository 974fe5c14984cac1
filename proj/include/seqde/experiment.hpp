// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_EXPERIMENT_HPP
#define SEQDE_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "seqde/acquisition.hpp"
#include "seqde/bench.hpp"
#include "seqde/csv.hpp"
#include "seqde/errors.hpp"
#include "seqde/input.hpp"
#include "seqde/interp.hpp"
#include "seqde/kl.hpp"
#include "seqde/oscillator.hpp"
#include "seqde/sampler.hpp"

namespace seqde {

enum class ProblemKind { Oscillator, Tabulated, Synthetic };
enum class InputKind { Gaussian, Empirical };

// Parsed experiment description. Loaded from versioned JSON with fail-fast
// validation: unknown keys at any level are rejected, all seeds must be
// explicit, and referenced files must exist when the config is loaded.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Synthetic;
  int oscillator_modes = 3;
  std::string tabulated_path;
  Interpolation tabulated_interpolation = Interpolation::Multilinear;
  std::string synthetic_name;

  bool has_input = false;
  InputKind input_kind = InputKind::Gaussian;
  Eigen::VectorXd input_variances;
  bool has_input_bounds = false;
  Box input_bounds;
  std::string empirical_path;

  SamplerConfig sampler;

  bool has_oracle = false;
  std::vector<int> oracle_resolution;
  int oracle_bins = 0;

  bool has_baseline = false;
  std::vector<int> baseline_sizes;
  int baseline_repeats = 0;

  std::string output_dir;
};

struct Problem {
  MapFunction map;
  InputDistribution input;
};

namespace detail {

inline void require_known_keys(const nlohmann::json& j, const char* context,
                               std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError(std::string(context) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string(context) + " has unknown key '" +
                        it.key() + "'");
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const char* context,
                                           const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(context) + " is missing required key '" +
                      key + "'");
  return *it;
}

template <class T>
T typed(const nlohmann::json& j, const char* context, const char* key) {
  try {
    return require_field(j, context, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(context) + " key '" + key +
                      "' has the wrong type");
  }
}

template <class T>
T typed_or(const nlohmann::json& j, const char* context, const char* key,
           T fallback) {
  if (j.find(key) == j.end()) return fallback;
  return typed<T>(j, context, key);
}

// Seeds must be literal nonnegative integers; the usual get<> would quietly
// truncate a float.
inline std::uint64_t typed_seed(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = require_field(j, "seeds", key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ConfigError(std::string("seeds.") + key +
                      " must be a nonnegative integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0)
    throw ConfigError(std::string("seeds.") + key +
                      " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

inline std::string resolve_path(const std::string& raw,
                                const std::filesystem::path& base) {
  std::filesystem::path p(raw);
  if (p.is_absolute()) return p.string();
  return (base / p).string();
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                                const std::filesystem::path&
                                                    base_dir) {
  using detail::require_field;
  using detail::require_known_keys;
  using detail::typed;
  using detail::typed_or;

  require_known_keys(j, "config",
                     {"version", "problem", "input", "sampler", "pso",
                      "seeds", "oracle", "baseline", "output_dir"});
  const int version = typed<int>(j, "config", "version");
  if (version != 1)
    throw ConfigError("config version " + std::to_string(version) +
                      " is not supported; this build reads version 1");

  ExperimentConfig cfg;

  const nlohmann::json& problem = require_field(j, "config", "problem");
  const std::string kind = typed<std::string>(problem, "problem", "kind");
  if (kind == "oscillator") {
    require_known_keys(problem, "problem", {"kind", "modes"});
    cfg.problem = ProblemKind::Oscillator;
    cfg.oscillator_modes = typed_or<int>(problem, "problem", "modes", 3);
    if (cfg.oscillator_modes < 1)
      throw ConfigError("problem.modes must be >= 1");
  } else if (kind == "tabulated") {
    require_known_keys(problem, "problem", {"kind", "path", "interpolation"});
    cfg.problem = ProblemKind::Tabulated;
    cfg.tabulated_path = detail::resolve_path(
        typed<std::string>(problem, "problem", "path"), base_dir);
    if (!std::filesystem::exists(cfg.tabulated_path))
      throw ConfigError("problem.path '" + cfg.tabulated_path +
                        "' does not exist");
    const std::string interp = typed_or<std::string>(
        problem, "problem", "interpolation", "multilinear");
    if (interp == "multilinear")
      cfg.tabulated_interpolation = Interpolation::Multilinear;
    else if (interp == "cubic")
      cfg.tabulated_interpolation = Interpolation::Cubic;
    else
      throw ConfigError("problem.interpolation must be 'multilinear' or "
                        "'cubic'");
  } else if (kind == "synthetic") {
    require_known_keys(problem, "problem", {"kind", "name"});
    cfg.problem = ProblemKind::Synthetic;
    cfg.synthetic_name = typed<std::string>(problem, "problem", "name");
  } else {
    throw ConfigError("problem.kind must be 'oscillator', 'tabulated', or "
                      "'synthetic'");
  }

  if (j.contains("input")) {
    if (cfg.problem == ProblemKind::Oscillator)
      throw ConfigError("the oscillator problem derives its input "
                        "distribution from the forcing expansion; remove the "
                        "'input' block");
    cfg.has_input = true;
    const nlohmann::json& input = j.at("input");
    const std::string ikind = typed<std::string>(input, "input", "kind");
    if (ikind == "gaussian") {
      require_known_keys(input, "input", {"kind", "variances", "bounds"});
      cfg.input_kind = InputKind::Gaussian;
      const auto vars =
          typed<std::vector<double>>(input, "input", "variances");
      if (vars.empty()) throw ConfigError("input.variances must not be empty");
      cfg.input_variances =
          Eigen::Map<const Eigen::VectorXd>(vars.data(),
                                            static_cast<long>(vars.size()));
      if (input.contains("bounds")) {
        const nlohmann::json& b = input.at("bounds");
        require_known_keys(b, "input.bounds", {"lower", "upper"});
        const auto lo = typed<std::vector<double>>(b, "input.bounds", "lower");
        const auto hi = typed<std::vector<double>>(b, "input.bounds", "upper");
        if (lo.size() != vars.size() || hi.size() != vars.size())
          throw ConfigError("input.bounds length does not match variances");
        cfg.has_input_bounds = true;
        cfg.input_bounds.lower = Eigen::Map<const Eigen::VectorXd>(
            lo.data(), static_cast<long>(lo.size()));
        cfg.input_bounds.upper = Eigen::Map<const Eigen::VectorXd>(
            hi.data(), static_cast<long>(hi.size()));
      }
    } else if (ikind == "empirical") {
      require_known_keys(input, "input", {"kind", "path"});
      cfg.input_kind = InputKind::Empirical;
      cfg.empirical_path = detail::resolve_path(
          typed<std::string>(input, "input", "path"), base_dir);
      if (!std::filesystem::exists(cfg.empirical_path))
        throw ConfigError("input.path '" + cfg.empirical_path +
                          "' does not exist");
    } else {
      throw ConfigError("input.kind must be 'gaussian' or 'empirical'");
    }
  } else if (cfg.problem != ProblemKind::Oscillator) {
    throw ConfigError("config is missing required key 'input'");
  }

  const nlohmann::json& sampler = require_field(j, "config", "sampler");
  require_known_keys(sampler, "sampler",
                     {"nstart", "ncore", "max_iterations", "epsilon", "alpha",
                      "recalibrate_every", "grid_resolution", "bins",
                      "log_observable", "calibration_restarts"});
  SamplerConfig& sc = cfg.sampler;
  sc.nstart = typed_or<int>(sampler, "sampler", "nstart", sc.nstart);
  sc.ncore = typed_or<int>(sampler, "sampler", "ncore", sc.ncore);
  sc.max_iterations =
      typed_or<int>(sampler, "sampler", "max_iterations", sc.max_iterations);
  sc.epsilon = typed_or<double>(sampler, "sampler", "epsilon", sc.epsilon);
  sc.alpha = typed_or<double>(sampler, "sampler", "alpha", sc.alpha);
  sc.recalibrate_every = typed_or<int>(sampler, "sampler",
                                       "recalibrate_every",
                                       sc.recalibrate_every);
  sc.grid_resolution =
      typed<std::vector<int>>(sampler, "sampler", "grid_resolution");
  sc.bins = typed_or<int>(sampler, "sampler", "bins", sc.bins);
  sc.log_observable = typed_or<bool>(sampler, "sampler", "log_observable",
                                     sc.log_observable);
  sc.calibration_restarts = typed_or<int>(
      sampler, "sampler", "calibration_restarts", sc.calibration_restarts);

  if (j.contains("pso")) {
    const nlohmann::json& pso = j.at("pso");
    require_known_keys(pso, "pso",
                       {"swarm_size", "iterations", "inertia", "cognitive",
                        "social"});
    sc.pso_swarm_size =
        typed_or<int>(pso, "pso", "swarm_size", sc.pso_swarm_size);
    sc.pso_iterations =
        typed_or<int>(pso, "pso", "iterations", sc.pso_iterations);
    sc.pso_inertia = typed_or<double>(pso, "pso", "inertia", sc.pso_inertia);
    sc.pso_cognitive =
        typed_or<double>(pso, "pso", "cognitive", sc.pso_cognitive);
    sc.pso_social = typed_or<double>(pso, "pso", "social", sc.pso_social);
  }

  const nlohmann::json& seeds = require_field(j, "config", "seeds");
  require_known_keys(seeds, "seeds", {"design", "pso", "calibration"});
  sc.seeds.design = detail::typed_seed(seeds, "design");
  sc.seeds.pso = detail::typed_seed(seeds, "pso");
  sc.seeds.calibration = detail::typed_seed(seeds, "calibration");

  sc.validate();

  if (j.contains("oracle")) {
    cfg.has_oracle = true;
    const nlohmann::json& oracle = j.at("oracle");
    require_known_keys(oracle, "oracle", {"resolution", "bins"});
    cfg.oracle_resolution =
        typed<std::vector<int>>(oracle, "oracle", "resolution");
    if (cfg.oracle_resolution.empty())
      throw ConfigError("oracle.resolution must not be empty");
    cfg.oracle_bins = typed_or<int>(oracle, "oracle", "bins", sc.bins);
    if (cfg.oracle_bins < 1) throw ConfigError("oracle.bins must be >= 1");
  }

  if (j.contains("baseline")) {
    cfg.has_baseline = true;
    const nlohmann::json& baseline = j.at("baseline");
    require_known_keys(baseline, "baseline", {"sizes", "repeats"});
    cfg.baseline_sizes =
        typed<std::vector<int>>(baseline, "baseline", "sizes");
    if (cfg.baseline_sizes.empty())
      throw ConfigError("baseline.sizes must not be empty");
    for (int s : cfg.baseline_sizes)
      if (s < 2) throw ConfigError("baseline.sizes entries must be >= 2");
    cfg.baseline_repeats = typed<int>(baseline, "baseline", "repeats");
    if (cfg.baseline_repeats < 1)
      throw ConfigError("baseline.repeats must be >= 1");
  }

  const std::string out_raw =
      typed_or<std::string>(j, "config", "output_dir", "");
  if (!out_raw.empty())
    cfg.output_dir = detail::resolve_path(out_raw, base_dir);
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_experiment_config(
      j, std::filesystem::path(path).parent_path());
}

inline Problem build_problem(const ExperimentConfig& cfg) {
  if (cfg.problem == ProblemKind::Oscillator) {
    OscillatorParams params;
    params.modes = cfg.oscillator_modes;
    const auto basis = std::make_shared<const KlBasis>(
        kl_expand(params.sigma_z, params.ell_z, params.horizon, params.modes));
    const MapFunction map = [params, basis](const Eigen::VectorXd& theta) {
      return oscillator_map(theta, params, *basis);
    };
    return Problem{map, InputDistribution::gaussian_diagonal(
                            basis->eigenvalues.head(params.modes))};
  }

  InputDistribution input = [&cfg] {
    if (!cfg.has_input)
      throw ConfigError("this problem kind needs an 'input' block");
    if (cfg.input_kind == InputKind::Empirical)
      return InputDistribution::empirical_grid_csv(cfg.empirical_path);
    if (cfg.has_input_bounds)
      return InputDistribution::gaussian_diagonal(cfg.input_variances,
                                                  cfg.input_bounds);
    return InputDistribution::gaussian_diagonal(cfg.input_variances);
  }();

  if (cfg.problem == ProblemKind::Tabulated) {
    const auto table = std::make_shared<const TabulatedMap>(
        load_tabulated_map(cfg.tabulated_path, cfg.tabulated_interpolation));
    if (table->dimension() != input.dimension())
      throw ConfigError("tabulated map dimension does not match the input "
                        "distribution");
    const MapFunction map = [table](const Eigen::VectorXd& theta) {
      return (*table)(theta);
    };
    return Problem{map, std::move(input)};
  }

  MapFunction map;
  int dim = 0;
  if (cfg.synthetic_name == "cubic") {
    dim = 1;
    map = [](const Eigen::VectorXd& t) { return t[0] * t[0] * t[0]; };
  } else if (cfg.synthetic_name == "tanh_ramp") {
    dim = 1;
    map = [](const Eigen::VectorXd& t) {
      return std::tanh(t[0]) + 0.1 * t[0];
    };
  } else if (cfg.synthetic_name == "ripple") {
    dim = 2;
    map = [](const Eigen::VectorXd& t) {
      return std::sin(2.0 * t[0]) * std::cos(2.0 * t[1]) +
             0.3 * (t[0] + t[1]);
    };
  } else {
    throw ConfigError("unknown synthetic problem '" + cfg.synthetic_name +
                      "'; available: cubic, tanh_ramp, ripple");
  }
  if (input.dimension() != dim)
    throw ConfigError("synthetic problem '" + cfg.synthetic_name + "' is " +
                      std::to_string(dim) + "-dimensional but the input has "
                      "dimension " + std::to_string(input.dimension()));
  return Problem{std::move(map), std::move(input)};
}

namespace detail {

inline std::string output_path(const std::string& out_dir,
                               const std::string& name) {
  return (std::filesystem::path(out_dir) / name).string();
}

inline void update_manifest(const std::string& out_dir,
                            const std::string& config_hash,
                            const std::vector<std::string>& new_outputs) {
  const std::string path = output_path(out_dir, "manifest.json");
  nlohmann::json j;
  j["config_hash"] = config_hash;
  std::vector<std::string> outputs;
  {
    std::ifstream in(path);
    if (in) {
      nlohmann::json old;
      try {
        in >> old;
        if (old.contains("outputs"))
          outputs = old.at("outputs").get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception&) {
        outputs.clear(); // manifest was damaged; rebuild it
      }
    }
  }
  for (const std::string& name : new_outputs)
    if (std::find(outputs.begin(), outputs.end(), name) == outputs.end())
      outputs.push_back(name);
  std::sort(outputs.begin(), outputs.end());
  j["outputs"] = outputs;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline std::string hash_config_file(const std::string& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + config_path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return std::string(buf);
}

struct ExperimentPaths {
  ExperimentConfig cfg;
  Problem problem;
  std::string out_dir;
  std::string config_hash;
};

inline ExperimentPaths open_experiment(const std::string& config_path,
                                       const std::string& out_override) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  std::string out = out_override.empty() ? cfg.output_dir : out_override;
  if (out.empty())
    throw ConfigError("no output directory: set 'output_dir' in the config "
                      "or pass --out");
  std::filesystem::create_directories(out);
  Problem problem = build_problem(cfg);
  return ExperimentPaths{std::move(cfg), std::move(problem), std::move(out),
                         hash_config_file(config_path)};
}

inline void write_records_csv(const std::string& path,
                              const std::vector<IterationRecord>& records,
                              int dimension) {
  std::vector<std::string> header = {"index"};
  for (int d = 0; d < dimension; ++d)
    header.push_back("theta_" + std::to_string(d + 1));
  header.insert(header.end(),
                {"q_observed", "criterion", "distance_fpm",
                 "error_vs_oracle"});
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const IterationRecord& r : records) {
    std::vector<double> row = {static_cast<double>(r.index)};
    for (long d = 0; d < r.theta_chosen.size(); ++d)
      row.push_back(r.theta_chosen[d]);
    row.insert(row.end(), {r.q_observed, r.criterion_value, r.distance_fpm,
                           r.error_vs_oracle});
    rows.push_back(std::move(row));
  }
  csv::write_table(path, header, rows);
}

} // namespace detail

// Runs the sequential experiment and exports its artifacts. Returns 0 when
// the stopping rule fired, 3 when the iteration cap was reached first. If
// pdf_exact.csv already exists in the output directory it becomes the
// error-vs-oracle reference for the records.
inline int cmd_run(const std::string& config_path,
                   const std::string& out_override) {
  detail::ExperimentPaths exp =
      detail::open_experiment(config_path, out_override);
  SamplerConfig cfg = exp.cfg.sampler;
  cfg.checkpoint_path = detail::output_path(exp.out_dir, "checkpoint.json");

  DensityEstimate reference;
  const DensityEstimate* ref = nullptr;
  const std::string exact_path =
      detail::output_path(exp.out_dir, "pdf_exact.csv");
  if (std::filesystem::exists(exact_path)) {
    reference = DensityEstimate::load_csv(exact_path);
    ref = &reference;
  }

  std::vector<std::string> outputs = {"checkpoint.json", "records.csv",
                                      "timings.csv", "dataset.csv",
                                      "pdf_final.csv"};
  const IterationCallback snapshot =
      [&exp, &outputs](const IterationRecord& rec, const DensityEstimate& pdf) {
        const std::string name =
            "pdf_iter_" + std::to_string(rec.index) + ".csv";
        pdf.save_csv(detail::output_path(exp.out_dir, name));
        outputs.push_back(name);
      };

  const SamplerResult res =
      run_sampler(exp.problem.map, exp.problem.input, cfg, ref, snapshot);

  detail::write_records_csv(detail::output_path(exp.out_dir, "records.csv"),
                            res.records, res.data.dimension());
  {
    std::vector<std::vector<double>> rows;
    for (const IterationRecord& r : res.records)
      rows.push_back({static_cast<double>(r.index), r.wall_time});
    csv::write_table(detail::output_path(exp.out_dir, "timings.csv"),
                     {"index", "wall_time_seconds"}, rows);
  }
  res.data.save_csv(detail::output_path(exp.out_dir, "dataset.csv"));
  res.final_pdf.save_csv(detail::output_path(exp.out_dir, "pdf_final.csv"));
  detail::update_manifest(exp.out_dir, exp.config_hash, outputs);
  return res.converged ? 0 : 3;
}

// Evaluates the true map on the dense oracle grid and writes pdf_exact.csv.
inline int cmd_oracle(const std::string& config_path,
                      const std::string& out_override) {
  detail::ExperimentPaths exp =
      detail::open_experiment(config_path, out_override);
  if (!exp.cfg.has_oracle)
    throw ConfigError("config has no 'oracle' block");
  const DensityEstimate exact =
      exact_pdf_oracle(exp.problem.map, exp.problem.input,
                       exp.cfg.oracle_resolution, exp.cfg.oracle_bins);
  exact.save_csv(detail::output_path(exp.out_dir, "pdf_exact.csv"));
  detail::update_manifest(exp.out_dir, exp.config_hash, {"pdf_exact.csv"});
  return 0;
}

// Latin-hypercube baseline sweep plus the sequential algorithm's error
// trace against the same oracle, for paired comparison. Generates
// pdf_exact.csv first if it is not already present.
inline int cmd_baseline(const std::string& config_path,
                        const std::string& out_override,
                        std::vector<int> sizes_override = {},
                        int repeats_override = 0) {
  detail::ExperimentPaths exp =
      detail::open_experiment(config_path, out_override);
  std::vector<int> sizes =
      sizes_override.empty() ? exp.cfg.baseline_sizes : sizes_override;
  const int repeats =
      repeats_override > 0 ? repeats_override : exp.cfg.baseline_repeats;
  if (sizes.empty() || repeats < 1)
    throw ConfigError("baseline sizes and repeats must come from the "
                      "config's 'baseline' block or the command line");

  const std::string exact_path =
      detail::output_path(exp.out_dir, "pdf_exact.csv");
  DensityEstimate reference;
  if (std::filesystem::exists(exact_path)) {
    reference = DensityEstimate::load_csv(exact_path);
  } else {
    if (!exp.cfg.has_oracle)
      throw ConfigError("pdf_exact.csv is absent and the config has no "
                        "'oracle' block to generate it");
    reference = exact_pdf_oracle(exp.problem.map, exp.problem.input,
                                 exp.cfg.oracle_resolution,
                                 exp.cfg.oracle_bins);
    reference.save_csv(exact_path);
  }

  const SamplerConfig& sc = exp.cfg.sampler;
  const QuadratureGrid grid =
      quadrature_grid(exp.problem.input, sc.grid_resolution);
  const auto entries =
      lh_baseline(exp.problem.map, exp.problem.input, grid, reference, sizes,
                  repeats, sc.seeds.design, sc.bins, sc.calibration_restarts);
  {
    std::vector<std::vector<double>> rows;
    for (const LhBaselineEntry& e : entries)
      rows.push_back({static_cast<double>(e.size), e.mean, e.sd});
    csv::write_table(detail::output_path(exp.out_dir, "lh_errors.csv"),
                     {"size", "mean_error", "sd_error"}, rows);
  }

  const SamplerResult res =
      run_sampler(exp.problem.map, exp.problem.input, sc, &reference);
  {
    std::vector<std::vector<double>> rows;
    for (const IterationRecord& r : res.records)
      rows.push_back({static_cast<double>(sc.nstart + r.index - 1),
                      r.error_vs_oracle});
    rows.push_back({static_cast<double>(res.data.size()),
                    log_l1_error(res.final_pdf, reference)});
    csv::write_table(detail::output_path(exp.out_dir,
                                         "algorithm_errors.csv"),
                     {"size", "error"}, rows);
  }
  detail::update_manifest(exp.out_dir, exp.config_hash,
                          {"pdf_exact.csv", "lh_errors.csv",
                           "algorithm_errors.csv"});
  return 0;
}

// Replays the checkpointed run's dataset prefixes and writes the criterion
// baseline, the asymptotic criterion estimate, and (in one dimension) the
// monotone lower bound for each snapshot.
inline int cmd_diagnostics(const std::string& config_path,
                           const std::string& out_override) {
  detail::ExperimentPaths exp =
      detail::open_experiment(config_path, out_override);
  const detail::SamplerState state = detail::read_checkpoint(
      detail::output_path(exp.out_dir, "checkpoint.json"));
  const SamplerConfig& sc = exp.cfg.sampler;
  const QuadratureGrid grid =
      quadrature_grid(exp.problem.input, sc.grid_resolution);

  std::vector<std::vector<double>> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n = sc.nstart; n <= state.data.size(); ++n) {
    Dataset prefix(state.data.dimension());
    for (int i = 0; i < n; ++i)
      prefix.add(state.data.point(i), state.data.value(i));
    const GpPosterior gp = GpPosterior::fit(prefix, state.gp->hyperparams());
    CriterionConfig ccfg;
    ccfg.alpha = sc.alpha;
    ccfg.bins = sc.bins;
    ccfg.metric = CriterionMetric::LogL1;
    ccfg.grid = &grid;
    const CriterionEvaluator evaluator(gp, ccfg);
    double asym = nan;
    try {
      asym = asymptotic_q(gp, ccfg);
    } catch (const Error&) {
    }
    double bound = nan;
    if (exp.problem.input.dimension() == 1) {
      try {
        bound = corollary_bound(gp, exp.problem.input,
                                sc.grid_resolution.front());
      } catch (const Error&) {
      }
    }
    rows.push_back({static_cast<double>(n), evaluator.baseline(), asym,
                    bound});
  }
  csv::write_table(detail::output_path(exp.out_dir, "diagnostics.csv"),
                   {"size", "criterion_baseline", "asymptotic_q",
                    "corollary_bound"},
                   rows);
  detail::update_manifest(exp.out_dir, exp.config_hash, {"diagnostics.csv"});
  return 0;
}

} // namespace seqde

#endif // SEQDE_EXPERIMENT_HPP
