#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/priors.hpp"

namespace catdag {

/// One synthetic-benchmark cell: q binary variables, n rows, G replicates.
struct ScenarioConfig {
  int q = 10;
  std::size_t n = 500;
  std::size_t replicates = 10;
  double edge_prob = 0.0;  // <= 0 means 2/q
  std::uint64_t seed = 1;
  std::size_t iterations = 0;  // 0 means 5000 for q <= 10, 10000 otherwise
  std::size_t burn_in = 0;     // 0 means 1000 for q <= 10, 2000 otherwise
  DirichletHyper hyper;
  DagPriorParams dag_prior;
  std::size_t truth_mc_draws = 1000000;
  std::size_t threads = 0;  // 0 means hardware concurrency

  double effective_edge_prob() const { return edge_prob > 0.0 ? edge_prob : 2.0 / q; }
  std::size_t effective_iterations() const { return iterations ? iterations : (q <= 10 ? 5000 : 10000); }
  std::size_t effective_burn_in() const { return burn_in ? burn_in : (q <= 10 ? 1000 : 2000); }
  /// Throws ConfigError on invalid values.
  void validate() const;
};

/// Outcome of one replicate. Effects are for response node 1 and treatments 2..q.
struct ReplicateResult {
  int q = 0;
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  Dag truth;
  std::vector<Edge> mpm_edges;
  bool mpm_cyclic = false;
  int shd = 0;
  double sen = 1.0;
  double spe = 1.0;
  bool sen_undefined = false;
  bool spe_undefined = false;
  // same metrics on the CPDAG adjacency of the (repaired) MPM and of the truth
  double sen_cpdag = 1.0;
  double spe_cpdag = 1.0;
  double acceptance_rate = 0.0;
  std::vector<double> true_effect;
  std::vector<double> true_effect_se;
  std::vector<double> estimate;
  std::vector<double> abs_error;
  double mean_abs_error = 0.0;
};

/// Replicate r uses seed config.seed + r for the DAG and SEM, so every
/// sample size of a replicate shares the same ground truth.
ReplicateResult run_replicate(const ScenarioConfig& config, std::size_t replicate);

/// All replicates, run concurrently; results are ordered by replicate index.
std::vector<ReplicateResult> run_scenario(const ScenarioConfig& config);

struct ScenarioSummary {
  int q = 0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double shd = 0.0;
  double sen = 0.0;   // percent
  double spe = 0.0;   // percent
  double ae = 0.0;    // x 100
  double shd_sd = 0.0;
  double sen_sd = 0.0;
  double spe_sd = 0.0;
  double ae_sd = 0.0;
  double sen_cpdag = 0.0;  // percent
  double spe_cpdag = 0.0;  // percent
};

ScenarioSummary aggregate(const std::vector<ReplicateResult>& results);

/// One row per replicate; per-node effects as columns AE_2..AE_q etc.
void write_replicates_csv(std::ostream& out, const std::vector<ReplicateResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<ScenarioSummary>& rows);

}  // namespace catdag
