#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "catdag/causal.hpp"
#include "catdag/dag.hpp"
#include "catdag/data.hpp"
#include "catdag/priors.hpp"
#include "catdag/query.hpp"
#include "catdag/summaries.hpp"

namespace catdag {

inline constexpr int kMaxEnumerationNodes = 5;

/// Every labeled DAG on q nodes, q <= 5. Throws ConfigError beyond that.
std::vector<Dag> enumerate_dags(int q);

struct ExactEntry {
  Dag dag;
  double log_unnormalized = 0.0;  // log p(X | D) + log p(D)
  double probability = 0.0;
};

struct ExactPosterior {
  int q = 0;
  std::vector<ExactEntry> entries;

  PpiMatrix ppi() const;
  /// Posterior mass of the given DAG (0 if absent).
  double probability_of(const Dag& dag) const;
};

ExactPosterior exact_posterior(const Dataset& ds, const DirichletHyper& hyper, const DagPriorParams& dag_prior);

struct ExactCausalMean {
  double value = 0.0;
  double std_error = 0.0;
};

/// sum_D p(D | X) * mean of gamma_v over conjugate theta draws given D.
/// DAGs with posterior mass below `min_mass` are skipped.
ExactCausalMean exact_causal_mean(const Dataset& ds, const CausalQuery& query, const DirichletHyper& hyper,
                                  const DagPriorParams& dag_prior, std::size_t theta_draws_per_dag = 10000,
                                  std::uint64_t seed = 1, double min_mass = 1e-12,
                                  const CausalOptions& options = {});

}  // namespace catdag
