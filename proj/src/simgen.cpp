#include "catdag/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catdag/errors.hpp"

namespace catdag {

GaussianSem GaussianSem::with_dag(const Dag& dag) {
  const int q = dag.num_nodes();
  return {dag, Eigen::MatrixXd::Zero(q, q), std::vector<double>(static_cast<std::size_t>(q), 1.0)};
}

Dag random_dag(int q, double p, Rng& rng) {
  if (q < 1) throw ConfigError("random_dag: q must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("edge probability must lie in (0, 1]");
  std::vector<Edge> edges;
  for (int j = 1; j < q; ++j) {
    for (int u = 0; u < j; ++u) {
      if (uniform_open01(rng) < p) edges.push_back({u, j});
    }
  }
  return Dag::from_edges(q, edges);
}

GaussianSem random_sem(const Dag& dag, Rng& rng) {
  GaussianSem sem = GaussianSem::with_dag(dag);
  for (const Edge& e : dag.edges()) {
    const double magnitude = 0.1 + 0.9 * uniform_open01(rng);
    const double sign = uniform_open01(rng) < 0.5 ? -1.0 : 1.0;
    sem.coeffs(e.to, e.from) = sign * magnitude;
  }
  return sem;
}

Eigen::MatrixXd sem_covariance(const GaussianSem& sem) {
  const auto q = sem.coeffs.rows();
  const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(q, q) - sem.coeffs;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(i_minus_b);
  if (!lu.isInvertible()) throw std::logic_error("sem_covariance: I - B is singular");
  const Eigen::MatrixXd inv = lu.inverse();
  Eigen::VectorXd d(q);
  for (Eigen::Index j = 0; j < q; ++j) d(j) = sem.variances[static_cast<std::size_t>(j)];
  Eigen::MatrixXd sigma = inv * d.asDiagonal() * inv.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

Eigen::MatrixXd sample_latent(const GaussianSem& sem, std::size_t n, Rng& rng) {
  const int q = sem.dag.num_nodes();
  const auto order = sem.dag.topological_order();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), q);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (int j : order) {
      double value = std::sqrt(sem.variances[static_cast<std::size_t>(j)]) * standard_normal(rng);
      for (int u : sem.dag.parents(j)) value += sem.coeffs(j, u) * z(r, u);
      z(r, j) = value;
    }
  }
  return z;
}

Dataset sample_binary(const GaussianSem& sem, std::size_t n, Rng& rng) {
  const Eigen::MatrixXd z = sample_latent(sem, n, rng);
  const int q = sem.dag.num_nodes();
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> levels;
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(q), std::vector<int>(n));
  for (int j = 0; j < q; ++j) {
    names.push_back("X" + std::to_string(j + 1));
    levels.push_back({"0", "1"});
    for (std::size_t i = 0; i < n; ++i) {
      columns[static_cast<std::size_t>(j)][i] = z(static_cast<Eigen::Index>(i), j) >= 0.0 ? 1 : 0;
    }
  }
  return Dataset(std::move(names), std::move(levels), std::move(columns));
}

TrueEffect true_causal_effect(const GaussianSem& sem, int v, int y, std::size_t mc_draws, Rng& rng) {
  const int q = sem.dag.num_nodes();
  if (v < 0 || v >= q || y < 0 || y >= q) throw QueryError("true_causal_effect: node out of range");
  if (v == y) throw QueryError("true_causal_effect: response and treatment must differ");
  const auto& pa = sem.dag.parents(v);
  if (std::binary_search(pa.begin(), pa.end(), y)) return {0.0, 0.0, true};
  if (pa.size() > 20) {
    throw InputError("true_causal_effect: node " + std::to_string(v + 1) +
                     " has more than 20 parents; simulate the intervened SEM instead");
  }

  // Sub-vector ordering: y, v, pa(v).
  std::vector<int> idx{y, v};
  idx.insert(idx.end(), pa.begin(), pa.end());
  const Eigen::MatrixXd sigma = sem_covariance(sem);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = sigma(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) throw std::logic_error("true_causal_effect: covariance not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  const std::size_t strata = std::size_t{1} << pa.size();
  constexpr std::size_t kBatches = 50;
  const std::size_t draws = std::max(mc_draws, kBatches * 2);
  const std::size_t batch_size = draws / kBatches;
  // counts[(k * 2 + x_v) * 2 + x_y]
  std::vector<double> total(strata * 4, 0.0), batch(strata * 4, 0.0);
  const auto contrast = [&](const std::vector<double>& c) {
    double n = 0.0;
    for (double x : c) n += x;
    double gamma = 0.0;
    for (std::size_t k = 0; k < strata; ++k) {
      const double n1 = c[(k * 2 + 1) * 2] + c[(k * 2 + 1) * 2 + 1];
      const double n0 = c[(k * 2) * 2] + c[(k * 2) * 2 + 1];
      if (n1 == 0.0 || n0 == 0.0) continue;
      gamma += (c[(k * 2 + 1) * 2 + 1] / n1 - c[(k * 2) * 2 + 1] / n0) * (n1 + n0) / n;
    }
    return gamma;
  };

  Eigen::VectorXd eps(m), z(m);
  double batch_sum = 0.0;
  double batch_sq = 0.0;
  for (std::size_t b = 0; b < kBatches; ++b) {
    std::fill(batch.begin(), batch.end(), 0.0);
    const std::size_t count = b + 1 == kBatches ? draws - batch_size * (kBatches - 1) : batch_size;
    for (std::size_t i = 0; i < count; ++i) {
      for (Eigen::Index a = 0; a < m; ++a) eps(a) = standard_normal(rng);
      z.noalias() = chol * eps;
      std::size_t k = 0;
      for (Eigen::Index a = m - 1; a >= 2; --a) k = (k << 1) | (z(a) >= 0.0 ? 1u : 0u);
      const std::size_t cell = (k * 2 + (z(1) >= 0.0 ? 1u : 0u)) * 2 + (z(0) >= 0.0 ? 1u : 0u);
      batch[cell] += 1.0;
    }
    const double g = contrast(batch);
    batch_sum += g;
    batch_sq += g * g;
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += batch[c];
  }
  const double kb = static_cast<double>(kBatches);
  const double batch_mean = batch_sum / kb;
  const double batch_var = std::max(0.0, (batch_sq - kb * batch_mean * batch_mean) / (kb - 1.0));
  return {contrast(total), std::sqrt(batch_var / kb), false};
}

}  // namespace catdag
