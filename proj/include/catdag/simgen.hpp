#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "catdag/dag.hpp"
#include "catdag/data.hpp"
#include "catdag/random.hpp"

namespace catdag {

/// Linear Gaussian SEM Z_j = sum_{u in pa(j)} beta(j, u) Z_u + eps_j.
struct GaussianSem {
  Dag dag;
  Eigen::MatrixXd coeffs;  // q x q, (j, u) = beta_{j,u}; nonzero only on DAG edges u -> j
  std::vector<double> variances;

  /// Zero coefficients and unit variances.
  static GaussianSem with_dag(const Dag& dag);
  double beta(int j, int u) const { return coeffs(j, u); }
};

/// Identity topological order; each u -> j with u < j kept with probability p.
/// Throws ConfigError unless p lies in (0, 1].
Dag random_dag(int q, double p, Rng& rng);

/// Coefficients uniform on [-1, -0.1] U [0.1, 1]; unit variances.
GaussianSem random_sem(const Dag& dag, Rng& rng);

/// Sigma = (I - B)^{-1} D (I - B)^{-T}.
Eigen::MatrixXd sem_covariance(const GaussianSem& sem);

/// n x q latent draws by forward simulation in topological order.
Eigen::MatrixXd sample_latent(const GaussianSem& sem, std::size_t n, Rng& rng);

/// Binary dataset with X_j = 1 iff Z_j >= 0.
Dataset sample_binary(const GaussianSem& sem, std::size_t n, Rng& rng);

struct TrueEffect {
  double value = 0.0;
  double std_error = 0.0;
  bool response_is_parent = false;
};

/// Parent-adjusted contrast Pr(Y=1 | X_v=1, pa=k) - Pr(Y=1 | X_v=0, pa=k),
/// averaged over Pr(pa=k), with every orthant probability estimated by Monte
/// Carlo draws from N(0, Sigma) restricted to (y, fa(v)). Strata never hit by
/// the draws contribute zero. Throws QueryError on y == v and InputError when
/// |pa(v)| > 20.
TrueEffect true_causal_effect(const GaussianSem& sem, int v, int y, std::size_t mc_draws, Rng& rng);

}  // namespace catdag
