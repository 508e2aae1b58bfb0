#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/data.hpp"
#include "catdag/priors.hpp"
#include "catdag/query.hpp"
#include "catdag/random.hpp"
#include "catdag/scores.hpp"
#include "catdag/theta.hpp"

namespace catdag {

enum class StoreTheta { kAll, kNone, kCausalOnly };
enum class InitDag { kEmpty, kRandom, kUser };

std::string to_string(StoreTheta s);
StoreTheta parse_store_theta(const std::string& s);

struct McmcConfig {
  std::size_t iterations = 5000;  // S
  std::size_t burn_in = 1000;     // B
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  DirichletHyper hyper;
  DagPriorParams dag_prior;
  InitDag init = InitDag::kEmpty;
  std::optional<Dag> init_dag;  // required when init == kUser
  StoreTheta store_theta = StoreTheta::kAll;
  /// Queries whose relevant nodes are retained under kCausalOnly.
  std::vector<CausalQuery> causal_queries;
  std::size_t counts_cache_capacity = CountsCache::kDefaultCapacity;

  /// Throws ConfigError on B >= S, thin == 0, bad hyperparameters, or a
  /// missing/mismatched user DAG.
  void validate(int q) const;
  std::size_t retained_draws() const;
};

struct Draw {
  std::size_t iteration = 0;
  Dag dag;
  std::optional<Theta> theta;
};

struct Trace {
  McmcConfig config;
  std::vector<Draw> draws;
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  double acceptance_rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

struct Proposal {
  Operator op;
  double log_proposal_ratio = 0.0;  // log|O_D| - log|O_D~|
};

/// Draws an operator uniformly from valid_operators(dag). Requires q >= 2.
Proposal propose(const Dag& dag, Rng& rng);

/// Log MH ratio for moving dag -> apply_operator(dag, op): family-score
/// differences over affected_nodes(op), DAG prior ratio and proposal ratio.
/// Throws std::logic_error if op is invalid.
double log_accept_ratio(FamilyScorer& scorer, const Dag& dag, const Operator& op,
                        const DagPriorParams& dag_prior);
double log_accept_ratio(const Dataset& ds, const Dag& dag, const Operator& op,
                        const DirichletHyper& hyper, const DagPriorParams& dag_prior);

/// Conjugate draw theta_k ~ Dir(a_k + N^k) for every observed configuration.
Theta sample_theta(CountsCache& counts, const Dag& dag, const DirichletHyper& hyper, Rng& rng);
Theta sample_theta(const Dataset& ds, const Dag& dag, const DirichletHyper& hyper, Rng& rng);

/// Random DAG for overdispersed starts: random node order, each
/// order-consistent edge included with probability 1/2.
Dag random_start_dag(int q, Rng& rng);

/// Nodes a causal query needs from theta: the ancestral closure of
/// {response} U fa(treatment) in the given DAG.
std::vector<int> query_relevant_nodes(const Dag& dag, const CausalQuery& query);

/// Alternating MH structure update and conjugate theta draw.
Trace run_chain(const Dataset& ds, const McmcConfig& config);

}  // namespace catdag
