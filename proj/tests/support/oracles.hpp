#pragma once

// Reference computations used only by tests. They avoid the library's
// counting, enumeration and table code so they can catch errors in it.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/data.hpp"
#include "catdag/priors.hpp"
#include "catdag/query.hpp"
#include "catdag/random.hpp"
#include "catdag/simgen.hpp"
#include "catdag/theta.hpp"

namespace oracle {

/// Adjacency matrix as q*q bits; bit (u * q + v) is u -> v.
bool acyclic_kahn(const std::vector<int>& adj, int q);

/// DAG count by filtering all 2^(q(q-1)) off-diagonal adjacency patterns.
std::size_t brute_force_dag_count(int q);

/// All DAGs by the same brute-force filter, as edge lists.
std::vector<std::vector<catdag::Edge>> brute_force_dags(int q);

/// Number of Insert/Delete/Reverse moves yielding a DAG, by trying each one.
std::size_t brute_force_operator_count(const std::vector<catdag::Edge>& edges, int q);

/// log p(X | D) from raw rows: per node, counts by full parent configuration
/// tallied in a std::map, Dirichlet-multinomial with a / (|X_j| |X_pa|).
double direct_log_ml(const std::vector<std::vector<int>>& rows, const std::vector<int>& cards,
                     const std::vector<catdag::Edge>& edges, double a);

/// log of the Beta-Binomial skeleton prior through the Beta function.
double direct_log_prior(std::size_t edges, int q, double c, double d);

/// Unsimplified log acceptance ratio for moving D -> D~: full joint marginal
/// likelihoods, priors and enumerated neighbourhood sizes.
double unsimplified_log_ratio(const std::vector<std::vector<int>>& rows, const std::vector<int>& cards,
                              const std::vector<catdag::Edge>& from, const std::vector<catdag::Edge>& to,
                              double a, double c, double d);

/// Edge-count law induced on DAGs by p(D) proportional to the skeleton prior.
std::vector<double> induced_edge_count_law(int q, double c, double d);

/// Raw Beta-Binomial law of the skeleton edge count.
std::vector<double> beta_binomial_law(int q, double c, double d);

/// p(x | do(X_v = level)) over all q variables, cell index with node 0 least
/// significant, by direct product over the truncated factorization.
std::vector<double> brute_force_interventional(const catdag::Theta& theta, const catdag::Dag& dag, int v, int level);

/// Pr(Y = b | do(high)) - Pr(Y = b | do(low)) from brute_force_interventional.
double brute_force_effect(const catdag::Theta& theta, const catdag::Dag& dag, const catdag::CausalQuery& query);

/// Random (DAG, theta) with every configuration materialized.
catdag::Theta random_full_theta(const catdag::Dag& dag, const std::vector<int>& cards, catdag::Rng& rng);

struct McValue {
  double value = 0.0;
  double std_error = 0.0;
};

/// Parent-adjusted binary contrast estimated from forward SEM simulation with
/// plug-in stratum frequencies (batch-means standard error).
McValue simulated_adjusted_effect(const catdag::GaussianSem& sem, int v, int y, std::size_t draws, std::uint64_t seed);

/// Latent-level intervention: edges into v cut, Z_v = |eps_v| or -|eps_v|,
/// difference of Pr(Z_y >= 0). Paired draws.
McValue latent_mutilated_effect(const catdag::GaussianSem& sem, int v, int y, std::size_t draws, std::uint64_t seed);

/// Marginal likelihood of a Bernoulli sample under Beta(alpha, beta), by
/// midpoint quadrature after the substitution p = sin^2(t).
double quadrature_bernoulli_ml(int ones, int zeros, double alpha, double beta);

}  // namespace oracle
