// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_SAMPLER_HPP
#define SEQDE_SAMPLER_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "seqde/acquisition.hpp"
#include "seqde/bench.hpp"
#include "seqde/density.hpp"
#include "seqde/errors.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"
#include "seqde/pso.hpp"
#include "seqde/rng.hpp"

namespace seqde {

struct SamplerSeeds {
  std::uint64_t design = 1;
  std::uint64_t pso = 2;
  std::uint64_t calibration = 3;
};

// Outer-loop configuration. The first ncore iterations use the L2 criterion
// metric and recalibrate hyperparameters every iteration; afterwards the
// metric switches to log-L1 and the hyperparameters freeze unless
// recalibrate_every > 0 requests periodic refreshes.
struct SamplerConfig {
  int nstart = 6;
  int ncore = 12;
  int max_iterations = 50;
  double epsilon = 1e-2; // stopping threshold on the log-L1 bound distance
  double alpha = 1.96;
  int recalibrate_every = 0;
  std::vector<int> grid_resolution;
  int bins = 60;
  bool log_observable = false;
  int calibration_restarts = 6;
  int pso_swarm_size = 40;
  int pso_iterations = 60;
  double pso_inertia = 0.72;
  double pso_cognitive = 1.49;
  double pso_social = 1.49;
  SamplerSeeds seeds;
  std::string checkpoint_path; // empty disables checkpointing

  void validate() const {
    if (nstart < 2) throw ConfigError("nstart must be >= 2");
    if (ncore < 0) throw ConfigError("ncore must be >= 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (recalibrate_every < 0)
      throw ConfigError("recalibrate_every must be >= 0");
    if (grid_resolution.empty())
      throw ConfigError("grid_resolution must not be empty");
    for (int r : grid_resolution)
      if (r < 2) throw ConfigError("grid_resolution entries must be >= 2");
    if (bins < 10) throw ConfigError("bins must be >= 10");
    if (calibration_restarts < 1)
      throw ConfigError("calibration_restarts must be >= 1");
    if (pso_swarm_size < 1 || pso_iterations < 1)
      throw ConfigError("pso swarm and iteration counts must be >= 1");
  }
};

struct IterationRecord {
  int index = 0;
  Eigen::VectorXd theta_chosen;
  double q_observed = 0.0;
  double criterion_value = 0.0;
  double distance_fpm = 0.0; // log-L1 distance between the bound pdfs
  double error_vs_oracle = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0.0; // seconds; informational, not persisted
};

struct SamplerResult {
  DensityEstimate final_pdf;
  Dataset data;
  std::vector<IterationRecord> records;
  GpPosterior gp;
  bool converged = false;
};

using IterationCallback =
    std::function<void(const IterationRecord&, const DensityEstimate&)>;

namespace detail {

constexpr int CHECKPOINT_VERSION = 1;

struct SamplerState {
  SamplerConfig cfg;
  Dataset data;
  std::optional<GpPosterior> gp;
  bool converged = false;
  int iteration = 0; // completed iterations
  std::vector<IterationRecord> records;
};

inline double checked_map_value(const MapFunction& map,
                                const Eigen::VectorXd& theta) {
  double q;
  try {
    q = map(theta);
  } catch (const MapEvaluationFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw MapEvaluationFailure(std::string("map evaluation failed: ") +
                               e.what());
  } catch (...) {
    throw MapEvaluationFailure("map evaluation failed");
  }
  if (!std::isfinite(q))
    throw MapEvaluationFailure("map returned a non-finite value");
  return q;
}

inline double observed_to_fit(double q, const SamplerConfig& cfg) {
  if (!cfg.log_observable) return q;
  if (!(q > 0.0))
    throw MapEvaluationFailure(
        "log_observable requires a strictly positive observable, got " +
        std::to_string(q));
  return std::log(q);
}

inline Eigen::VectorXd output_field(const Eigen::VectorXd& field,
                                    const SamplerConfig& cfg) {
  if (!cfg.log_observable) return field;
  return field.array().exp();
}

inline KernelHyperparams fit_hyperparams(const SamplerState& s,
                                         const Box& bounds, int iteration) {
  if (s.data.size() >= 3)
    return calibrate_hyperparams(s.data, s.cfg.calibration_restarts,
                                 mix_seed(s.cfg.seeds.calibration,
                                          static_cast<std::uint64_t>(
                                              iteration)));
  // too few points to calibrate: spread the prior over the box
  const Eigen::VectorXd values = s.data.values();
  const double mean = values.mean();
  const double var =
      (values.array() - mean).square().sum() / values.size();
  Eigen::VectorXd ell(bounds.dimension());
  for (int d = 0; d < bounds.dimension(); ++d) ell[d] = 0.25 * bounds.extent(d);
  return make_hyperparams(std::max(var, 1e-6), std::move(ell));
}

inline Eigen::VectorXd perturb_duplicate(const Eigen::VectorXd& theta,
                                         const Dataset& data, const Box& box,
                                         std::uint64_t seed) {
  Rng gen(seed);
  const int m = box.dimension();
  double scale = 1e-6;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Eigen::VectorXd dir(m);
    for (int d = 0; d < m; ++d) dir[d] = gen.normal();
    const double norm = dir.norm();
    if (norm < 1e-300) continue;
    dir /= norm;
    Eigen::VectorXd cand = theta;
    for (int d = 0; d < m; ++d) {
      cand[d] += scale * box.extent(d) * dir[d];
      if (cand[d] < box.lower[d]) cand[d] = box.lower[d];
      if (cand[d] > box.upper[d]) cand[d] = box.upper[d];
    }
    if (data.distance_to(cand) >= Dataset::MIN_SEPARATION) return cand;
    scale *= 2.0;
  }
  throw DuplicatePoint("could not perturb a duplicate proposal away from "
                       "the existing design");
}

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Eigen::VectorXd json_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  long i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (long r = 0; r < m.rows(); ++r)
    rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

inline Eigen::MatrixXd json_matrix(const nlohmann::json& j, long cols) {
  Eigen::MatrixXd m(static_cast<long>(j.size()), cols);
  long r = 0;
  for (const auto& row : j) {
    if (static_cast<long>(row.size()) != cols)
      throw CorruptCheckpoint("checkpoint matrix row has wrong length");
    long c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

inline void write_checkpoint(const SamplerState& s) {
  if (s.cfg.checkpoint_path.empty()) return;
  nlohmann::json j;
  j["version"] = CHECKPOINT_VERSION;

  nlohmann::json cfg;
  cfg["nstart"] = s.cfg.nstart;
  cfg["ncore"] = s.cfg.ncore;
  cfg["max_iterations"] = s.cfg.max_iterations;
  cfg["epsilon"] = s.cfg.epsilon;
  cfg["alpha"] = s.cfg.alpha;
  cfg["recalibrate_every"] = s.cfg.recalibrate_every;
  cfg["grid_resolution"] = s.cfg.grid_resolution;
  cfg["bins"] = s.cfg.bins;
  cfg["log_observable"] = s.cfg.log_observable;
  cfg["calibration_restarts"] = s.cfg.calibration_restarts;
  cfg["pso_swarm_size"] = s.cfg.pso_swarm_size;
  cfg["pso_iterations"] = s.cfg.pso_iterations;
  cfg["pso_inertia"] = s.cfg.pso_inertia;
  cfg["pso_cognitive"] = s.cfg.pso_cognitive;
  cfg["pso_social"] = s.cfg.pso_social;
  cfg["seed_design"] = s.cfg.seeds.design;
  cfg["seed_pso"] = s.cfg.seeds.pso;
  cfg["seed_calibration"] = s.cfg.seeds.calibration;
  j["config"] = std::move(cfg);

  j["iteration"] = s.iteration;
  j["converged"] = s.converged;
  j["points"] = matrix_json(s.data.points());
  j["values"] = vector_json(s.data.values());
  j["signal_variance"] = s.gp->hyperparams().signal_variance;
  j["lengthscales"] = vector_json(s.gp->hyperparams().lengthscales);
  j["jitter"] = s.gp->hyperparams().jitter;
  j["prior_mean"] = s.gp->prior_mean();
  j["chol"] = matrix_json(s.gp->chol_factor());
  j["gp_weights"] = vector_json(s.gp->weights());

  nlohmann::json recs = nlohmann::json::array();
  for (const IterationRecord& r : s.records) {
    nlohmann::json e;
    e["index"] = r.index;
    e["theta"] = vector_json(r.theta_chosen);
    e["q"] = r.q_observed;
    e["criterion"] = r.criterion_value;
    e["distance_fpm"] = r.distance_fpm;
    if (std::isfinite(r.error_vs_oracle)) e["error"] = r.error_vs_oracle;
    recs.push_back(std::move(e));
  }
  j["records"] = std::move(recs);

  const std::string tmp = s.cfg.checkpoint_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint '" + tmp + "'");
    out << j.dump();
    out << '\n';
  }
  if (std::rename(tmp.c_str(), s.cfg.checkpoint_path.c_str()) != 0)
    throw Error("cannot move checkpoint into place at '" +
                s.cfg.checkpoint_path + "'");
}

inline SamplerState read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptCheckpoint("checkpoint '" + path + "' is missing or "
                                   "unreadable");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCheckpoint("checkpoint '" + path + "' is not valid JSON: " +
                            e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != CHECKPOINT_VERSION)
      throw CorruptCheckpoint("checkpoint '" + path + "' has version " +
                              std::to_string(version) + "; this build reads "
                              "version " +
                              std::to_string(CHECKPOINT_VERSION));
    SamplerState s;
    const nlohmann::json& cfg = j.at("config");
    s.cfg.nstart = cfg.at("nstart").get<int>();
    s.cfg.ncore = cfg.at("ncore").get<int>();
    s.cfg.max_iterations = cfg.at("max_iterations").get<int>();
    s.cfg.epsilon = cfg.at("epsilon").get<double>();
    s.cfg.alpha = cfg.at("alpha").get<double>();
    s.cfg.recalibrate_every = cfg.at("recalibrate_every").get<int>();
    s.cfg.grid_resolution =
        cfg.at("grid_resolution").get<std::vector<int>>();
    s.cfg.bins = cfg.at("bins").get<int>();
    s.cfg.log_observable = cfg.at("log_observable").get<bool>();
    s.cfg.calibration_restarts = cfg.at("calibration_restarts").get<int>();
    s.cfg.pso_swarm_size = cfg.at("pso_swarm_size").get<int>();
    s.cfg.pso_iterations = cfg.at("pso_iterations").get<int>();
    s.cfg.pso_inertia = cfg.at("pso_inertia").get<double>();
    s.cfg.pso_cognitive = cfg.at("pso_cognitive").get<double>();
    s.cfg.pso_social = cfg.at("pso_social").get<double>();
    s.cfg.seeds.design = cfg.at("seed_design").get<std::uint64_t>();
    s.cfg.seeds.pso = cfg.at("seed_pso").get<std::uint64_t>();
    s.cfg.seeds.calibration = cfg.at("seed_calibration").get<std::uint64_t>();
    s.cfg.checkpoint_path = path;
    s.cfg.validate();

    const Eigen::VectorXd values = json_vector(j.at("values"));
    const long n = values.size();
    if (n < 1) throw CorruptCheckpoint("checkpoint has an empty dataset");
    const nlohmann::json& pts = j.at("points");
    if (static_cast<long>(pts.size()) != n)
      throw CorruptCheckpoint("checkpoint points and values disagree");
    const long m = static_cast<long>(pts.front().size());
    const Eigen::MatrixXd points = json_matrix(pts, m);
    s.data = Dataset(static_cast<int>(m));
    for (long i = 0; i < n; ++i)
      s.data.add(points.row(i).transpose(), values[i]);

    KernelHyperparams hp;
    hp.signal_variance = j.at("signal_variance").get<double>();
    hp.lengthscales = json_vector(j.at("lengthscales"));
    hp.jitter = j.at("jitter").get<double>();
    hp.validate(static_cast<int>(m));
    s.gp = GpPosterior::restore(s.data, hp, j.at("prior_mean").get<double>(),
                                json_matrix(j.at("chol"), n),
                                json_vector(j.at("gp_weights")));
    s.converged = j.at("converged").get<bool>();
    s.iteration = j.at("iteration").get<int>();
    if (s.iteration < 0 || static_cast<long>(j.at("records").size()) !=
                               static_cast<long>(s.iteration))
      throw CorruptCheckpoint("checkpoint record count does not match the "
                              "iteration counter");
    int prev = 0;
    for (const auto& e : j.at("records")) {
      IterationRecord r;
      r.index = e.at("index").get<int>();
      if (r.index <= prev)
        throw CorruptCheckpoint("checkpoint record indices are not "
                                "strictly increasing");
      prev = r.index;
      r.theta_chosen = json_vector(e.at("theta"));
      r.q_observed = e.at("q").get<double>();
      r.criterion_value = e.at("criterion").get<double>();
      r.distance_fpm = e.at("distance_fpm").get<double>();
      if (e.contains("error")) r.error_vs_oracle = e.at("error").get<double>();
      s.records.push_back(std::move(r));
    }
    return s;
  } catch (const CorruptCheckpoint&) {
    throw;
  } catch (const Error& e) {
    throw CorruptCheckpoint("checkpoint '" + path + "' is inconsistent: " +
                            e.what());
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCheckpoint("checkpoint '" + path + "' is missing or "
                            "mistypes a field: " + e.what());
  }
}

// Runs iterations until the stopping rule or the iteration cap fires, then
// computes the final pushforward from the complete dataset.
inline SamplerResult advance(SamplerState& s, const MapFunction& map,
                             const InputDistribution& input,
                             const DensityEstimate* reference,
                             const IterationCallback& on_iteration) {
  const SamplerConfig& cfg = s.cfg;
  if (static_cast<int>(cfg.grid_resolution.size()) != input.dimension())
    throw ConfigError("grid_resolution dimension does not match the input");
  const Box& box = input.bounds();
  const QuadratureGrid grid = quadrature_grid(input, cfg.grid_resolution);

  while (!s.converged && s.iteration < cfg.max_iterations) {
    const int it = s.iteration + 1;
    const auto t0 = std::chrono::steady_clock::now();

    const bool recalibrate =
        it <= cfg.ncore ||
        (cfg.recalibrate_every > 0 && it % cfg.recalibrate_every == 0);
    if (recalibrate || !s.gp)
      s.gp = GpPosterior::fit(s.data, fit_hyperparams(s, box, it));

    CriterionConfig ccfg;
    ccfg.alpha = cfg.alpha;
    ccfg.bins = cfg.bins;
    ccfg.metric = it <= cfg.ncore ? CriterionMetric::L2 : CriterionMetric::LogL1;
    ccfg.grid = &grid;
    CriterionEvaluator evaluator(*s.gp, ccfg);

    const GridPrediction& pred = evaluator.prediction();
    const Eigen::VectorXd sigma = pred.variance.cwiseSqrt();
    const Eigen::VectorXd plus =
        output_field(pred.mean + cfg.alpha * sigma, cfg);
    const Eigen::VectorXd minus =
        output_field(pred.mean - cfg.alpha * sigma, cfg);
    const BoundPdfs bounds =
        bound_pdfs_from_fields(plus, minus, grid.weights, cfg.bins);
    double distance = 0.0;
    try {
      distance = log_l1_distance(bounds.plus, bounds.minus);
    } catch (const NoOverlap&) {
      // both bound pdfs collapsed into disjoint slivers; the integral over
      // the (empty) region where both are positive is zero
      distance = 0.0;
    }
    const DensityEstimate estimate =
        pushforward(output_field(pred.mean, cfg), grid.weights, cfg.bins);

    PsoConfig pso;
    pso.swarm_size = cfg.pso_swarm_size;
    pso.iterations = cfg.pso_iterations;
    pso.inertia = cfg.pso_inertia;
    pso.cognitive = cfg.pso_cognitive;
    pso.social = cfg.pso_social;
    pso.seed = mix_seed(cfg.seeds.pso, static_cast<std::uint64_t>(it));
    pso.bounds = box;
    const PsoResult proposal = pso_minimize(
        [&evaluator](const Eigen::VectorXd& theta) { return evaluator(theta); },
        pso);

    Eigen::VectorXd theta_star = proposal.best_point;
    if (s.data.distance_to(theta_star) < Dataset::MIN_SEPARATION)
      theta_star = perturb_duplicate(
          theta_star, s.data, box,
          mix_seed(mix_seed(cfg.seeds.pso, static_cast<std::uint64_t>(it)),
                   0x70657274757262ULL));

    const double q = checked_map_value(map, theta_star);

    IterationRecord rec;
    rec.index = it;
    rec.theta_chosen = theta_star;
    rec.q_observed = q;
    rec.criterion_value = proposal.best_value;
    rec.distance_fpm = distance;
    if (reference != nullptr)
      rec.error_vs_oracle = log_l1_error(estimate, *reference);

    const double value = observed_to_fit(q, cfg);
    s.data.add(theta_star, value);
    s.gp = s.gp->append(theta_star, value);

    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    s.records.push_back(rec);
    s.iteration = it;
    if (distance < cfg.epsilon) s.converged = true;
    write_checkpoint(s);
    if (on_iteration) on_iteration(s.records.back(), estimate);
  }

  if (!s.gp) s.gp = GpPosterior::fit(s.data, fit_hyperparams(s, box, 0));
  const GridPrediction final_pred = s.gp->predict(grid.nodes);
  SamplerResult result{
      pushforward(output_field(final_pred.mean, cfg), grid.weights, cfg.bins),
      s.data, std::move(s.records), *s.gp, s.converged};
  return result;
}

} // namespace detail

// Sequential surrogate-based sampling: Latin hypercube initialization, then
// iterate fit -> bound pdfs -> minimize the acquisition criterion -> evaluate
// the map -> append, stopping when the bound-pdf distance drops below
// epsilon. A MapEvaluationFailure aborts the run and leaves the last
// checkpoint on disk.
inline SamplerResult run_sampler(const MapFunction& map,
                                 const InputDistribution& input,
                                 const SamplerConfig& cfg,
                                 const DensityEstimate* reference = nullptr,
                                 const IterationCallback& on_iteration = {}) {
  cfg.validate();
  detail::SamplerState s;
  s.cfg = cfg;
  s.data = Dataset(input.dimension());
  const Eigen::MatrixXd design =
      latin_hypercube(cfg.nstart, input.bounds(), cfg.seeds.design);
  for (long i = 0; i < design.rows(); ++i) {
    const Eigen::VectorXd theta = design.row(i).transpose();
    s.data.add(theta, detail::observed_to_fit(
                          detail::checked_map_value(map, theta), cfg));
  }
  return detail::advance(s, map, input, reference, on_iteration);
}

// Continues a checkpointed run; with the same map, input, and seeds the
// remaining records are identical to those of an uninterrupted run.
inline SamplerResult resume_sampler(const std::string& checkpoint_path,
                                    const MapFunction& map,
                                    const InputDistribution& input,
                                    const DensityEstimate* reference = nullptr,
                                    const IterationCallback& on_iteration = {}) {
  detail::SamplerState s = detail::read_checkpoint(checkpoint_path);
  if (s.data.dimension() != input.dimension())
    throw CorruptCheckpoint("checkpoint dimension does not match the input "
                            "distribution");
  return detail::advance(s, map, input, reference, on_iteration);
}

} // namespace seqde

#endif // SEQDE_SAMPLER_HPP
