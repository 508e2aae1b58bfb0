#include "catdag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catdag/errors.hpp"
#include "catdag/mcmc.hpp"
#include "catdag/random.hpp"
#include "catdag/scores.hpp"

namespace catdag {

std::vector<Dag> enumerate_dags(int q) {
  if (q < 0 || q > kMaxEnumerationNodes) {
    throw ConfigError("DAG enumeration is limited to q <= " + std::to_string(kMaxEnumerationNodes));
  }
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < q; ++u) {
    for (int v = u + 1; v < q; ++v) pairs.emplace_back(u, v);
  }
  // Each unordered pair is absent, u -> v or v -> u.
  std::size_t candidates = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) candidates *= 3;
  std::vector<Dag> out;
  std::vector<Edge> edges;
  for (std::size_t code = 0; code < candidates; ++code) {
    edges.clear();
    std::size_t rest = code;
    for (const auto& [u, v] : pairs) {
      const auto state = rest % 3;
      rest /= 3;
      if (state == 1) edges.push_back({u, v});
      if (state == 2) edges.push_back({v, u});
    }
    if (is_acyclic(edges, q)) out.push_back(Dag::from_edges(q, edges));
  }
  return out;
}

ExactPosterior exact_posterior(const Dataset& ds, const DirichletHyper& hyper, const DagPriorParams& dag_prior) {
  hyper.validate();
  dag_prior.validate();
  ExactPosterior post;
  post.q = ds.num_vars();
  FamilyScorer scorer(ds, hyper);
  double max_log = -std::numeric_limits<double>::infinity();
  for (Dag& dag : enumerate_dags(post.q)) {
    const double lp = scorer.dag(dag) + log_dag_prior(dag, dag_prior);
    max_log = std::max(max_log, lp);
    post.entries.push_back({std::move(dag), lp, 0.0});
  }
  double sum = 0.0;
  for (const auto& e : post.entries) sum += std::exp(e.log_unnormalized - max_log);
  const double log_z = max_log + std::log(sum);
  for (auto& e : post.entries) e.probability = std::exp(e.log_unnormalized - log_z);
  return post;
}

PpiMatrix ExactPosterior::ppi() const {
  PpiMatrix out(q);
  for (const auto& e : entries) {
    for (const Edge& edge : e.dag.edges()) out(edge.from, edge.to) += e.probability;
  }
  return out;
}

double ExactPosterior::probability_of(const Dag& dag) const {
  for (const auto& e : entries) {
    if (e.dag == dag) return e.probability;
  }
  return 0.0;
}

ExactCausalMean exact_causal_mean(const Dataset& ds, const CausalQuery& query, const DirichletHyper& hyper,
                                  const DagPriorParams& dag_prior, std::size_t theta_draws_per_dag,
                                  std::uint64_t seed, double min_mass, const CausalOptions& options) {
  if (theta_draws_per_dag < 2) throw ConfigError("exact_causal_mean needs at least two theta draws per DAG");
  const ExactPosterior post = exact_posterior(ds, hyper, dag_prior);
  CountsCache counts(ds);
  ExactCausalMean out;
  double var = 0.0;
  for (std::size_t d = 0; d < post.entries.size(); ++d) {
    const auto& entry = post.entries[d];
    if (entry.probability < min_mass) continue;
    Rng rng(mix_seed(seed, d));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < theta_draws_per_dag; ++t) {
      const Theta theta = sample_theta(counts, entry.dag, hyper, rng);
      const double g = gamma_v(theta, entry.dag, query, options).value;
      sum += g;
      sum_sq += g * g;
    }
    const double n = static_cast<double>(theta_draws_per_dag);
    const double mean = sum / n;
    const double s2 = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    out.value += entry.probability * mean;
    var += entry.probability * entry.probability * s2 / n;
  }
  out.std_error = std::sqrt(var);
  return out;
}

}  // namespace catdag
