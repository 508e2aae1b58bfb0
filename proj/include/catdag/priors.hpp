#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "catdag/dag.hpp"

namespace catdag {

/// BDEu hyperparameter: every Dirichlet entry of family j is a / |X_fa(j)|.
struct DirichletHyper {
  double a = 1.0;

  /// Throws ConfigError unless a > 0 and finite.
  void validate() const;
  double entry(std::uint64_t family_cells) const;
};

/// Beta(c, d) prior on the edge-inclusion probability of the skeleton.
struct DagPriorParams {
  double c = 1.0;
  double d = 1.0;

  void validate() const;
};

/// a / |X_fa(j)|.
double bdeu_entry(double a, std::uint64_t family_cells);

/// log h(a) = log Gamma(sum a_m) - sum log Gamma(a_m). Throws InputError on a
/// non-positive entry.
double log_dirichlet_norm(std::span<const double> alpha);

/// Log Beta-Binomial mass of a skeleton with `edges` edges on q nodes,
/// eta integrated out.
double log_skeleton_prior(std::size_t edges, int q, const DagPriorParams& params);

/// log p(D) up to a constant: log_skeleton_prior at the DAG's edge count.
double log_dag_prior(const Dag& dag, const DagPriorParams& params);

}  // namespace catdag
